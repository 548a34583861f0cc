//! Simple (`{0,1}`-valued) quasi-measures on genus-0 meshes.
//!
//! A simple quasi-measure is determined by its values `ν` on closed solid
//! sets. For an open set `U` with components `U_i`, each component of the
//! complement of `U_i` is solid and
//!
//! ```text
//! τ(U) = Σ_i [ 1 − Σ_j ν(K_ij) ],   K_ij ∈ components(S² ∖ U_i)
//! τ(C) = 1 − τ(S² ∖ C)              for closed C
//! ```
//!
//! The evaluation builds the adjacency graph between the components of `U`
//! and of its complement. On a sphere this graph is a tree, and the
//! complement components of `U_i` are exactly the branches of the tree at
//! node `U_i`, so every `ν(K_ij)` comes from subtree sums of the two
//! additive statistics the solid-set functions need (marker count and
//! lumped area).

use crate::error::{Error, Result};
use crate::mesh::{MeshId, SetKind, SurfaceMesh, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolidSetVariant {
    /// Aarnes' 3-point rule: `ν(S) = 1` iff `S` holds at least two markers.
    ThreePoint { markers: [usize; 3] },
    /// Median rule: `ν(S) = 1` iff `area(S) ≥ threshold`.
    AreaThreshold { threshold: f64 },
}

/// `{0,1}`-valued rule on closed solid vertex sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolidSetFunction {
    variant: SolidSetVariant,
    mesh_id: MeshId,
}

impl SolidSetFunction {
    pub fn three_point(mesh: &SurfaceMesh, markers: [usize; 3]) -> Result<Self> {
        let [a, b, c] = markers;
        if a == b || b == c || a == c {
            return Err(Error::InvalidParameter("marker vertices must be distinct".into()));
        }
        if markers.iter().any(|&m| m >= mesh.num_vertices()) {
            return Err(Error::InvalidParameter("marker vertex out of range".into()));
        }
        Ok(SolidSetFunction {
            variant: SolidSetVariant::ThreePoint { markers },
            mesh_id: mesh.id(),
        })
    }

    /// 3-point rule on the mesh's own first three markers.
    pub fn three_point_from_markers(mesh: &SurfaceMesh) -> Result<Self> {
        match mesh.markers() {
            [a, b, c, ..] => Self::three_point(mesh, [*a, *b, *c]),
            _ => Err(Error::InvalidParameter(
                "mesh carries fewer than three markers".into(),
            )),
        }
    }

    pub fn area_threshold(mesh: &SurfaceMesh, threshold: f64) -> Result<Self> {
        if !(threshold > 0.0 && threshold < mesh.total_weight()) {
            return Err(Error::InvalidParameter(format!(
                "area threshold {threshold} outside (0, {})",
                mesh.total_weight()
            )));
        }
        Ok(SolidSetFunction {
            variant: SolidSetVariant::AreaThreshold { threshold },
            mesh_id: mesh.id(),
        })
    }

    /// Area threshold at half the total weight.
    pub fn median(mesh: &SurfaceMesh) -> Result<Self> {
        Self::area_threshold(mesh, 0.5 * mesh.total_weight())
    }

    pub fn variant(&self) -> SolidSetVariant {
        self.variant
    }

    pub fn mesh_id(&self) -> MeshId {
        self.mesh_id
    }

    /// Value on a solid set. Open and closed solid sets with the same
    /// vertices get the same value.
    pub fn nu(&self, mesh: &SurfaceMesh, s: &VertexSet) -> Result<u8> {
        if mesh.id() != self.mesh_id {
            return Err(Error::MeshMismatch);
        }
        if !mesh.is_solid(s)? {
            return Err(Error::NotSolid);
        }
        Ok(match self.variant {
            SolidSetVariant::ThreePoint { markers } => {
                let hits = markers.iter().filter(|&&m| s.contains(m)).count();
                u8::from(hits >= 2)
            }
            SolidSetVariant::AreaThreshold { threshold } => {
                u8::from(mesh.set_area(s)? >= threshold)
            }
        })
    }

    fn nu_from_stats(&self, stats: BranchStats) -> u8 {
        match self.variant {
            SolidSetVariant::ThreePoint { .. } => u8::from(stats.markers >= 2),
            SolidSetVariant::AreaThreshold { threshold } => u8::from(stats.mass >= threshold),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct BranchStats {
    markers: usize,
    mass: f64,
}

impl std::ops::Add for BranchStats {
    type Output = BranchStats;
    fn add(self, o: BranchStats) -> BranchStats {
        BranchStats {
            markers: self.markers + o.markers,
            mass: self.mass + o.mass,
        }
    }
}

impl std::ops::Sub for BranchStats {
    type Output = BranchStats;
    fn sub(self, o: BranchStats) -> BranchStats {
        BranchStats {
            markers: self.markers - o.markers,
            mass: self.mass - o.mass,
        }
    }
}

/// Extension of a [`SolidSetFunction`] to all open and closed vertex sets.
#[derive(Debug, Clone)]
pub struct QuasiMeasure {
    base: SolidSetFunction,
    masses: Vec<f64>,
    is_marker: Vec<bool>,
}

impl QuasiMeasure {
    pub fn new(mesh: &SurfaceMesh, base: SolidSetFunction) -> Result<Self> {
        if mesh.id() != base.mesh_id {
            return Err(Error::MeshMismatch);
        }
        let mut is_marker = vec![false; mesh.num_vertices()];
        if let SolidSetVariant::ThreePoint { markers } = base.variant {
            for m in markers {
                is_marker[m] = true;
            }
        }
        Ok(QuasiMeasure {
            base,
            masses: mesh.vertex_masses(),
            is_marker,
        })
    }

    pub fn base(&self) -> &SolidSetFunction {
        &self.base
    }

    pub fn mesh_id(&self) -> MeshId {
        self.base.mesh_id
    }

    /// `τ` of an open set.
    pub fn tau_open(&self, mesh: &SurfaceMesh, u: &VertexSet) -> Result<u8> {
        self.check(mesh, u)?;
        if u.kind() != SetKind::Open {
            return Err(Error::WrongKind {
                expected: "open",
                got: u.kind().name(),
            });
        }
        self.open_value(mesh, u.mask())
    }

    /// `τ(C) = 1 − τ(S² ∖ C)`.
    pub fn tau_closed(&self, mesh: &SurfaceMesh, c: &VertexSet) -> Result<u8> {
        self.check(mesh, c)?;
        if c.kind() != SetKind::Closed {
            return Err(Error::WrongKind {
                expected: "closed",
                got: c.kind().name(),
            });
        }
        let comp: Vec<bool> = c.mask().iter().map(|m| !m).collect();
        Ok(1 - self.open_value(mesh, &comp)?)
    }

    /// Dispatch on the set's kind.
    pub fn tau(&self, mesh: &SurfaceMesh, s: &VertexSet) -> Result<u8> {
        match s.kind() {
            SetKind::Open => self.tau_open(mesh, s),
            SetKind::Closed => self.tau_closed(mesh, s),
        }
    }

    fn check(&self, mesh: &SurfaceMesh, s: &VertexSet) -> Result<()> {
        if mesh.id() != self.base.mesh_id || s.mesh_id() != self.base.mesh_id {
            return Err(Error::MeshMismatch);
        }
        Ok(())
    }

    pub(crate) fn open_value(&self, mesh: &SurfaceMesh, mask: &[bool]) -> Result<u8> {
        let inside: Vec<bool> = mask.to_vec();
        let outside: Vec<bool> = mask.iter().map(|m| !m).collect();
        let (in_labels, n_in) = mesh.component_labels(&inside);
        if n_in == 0 {
            return Ok(0);
        }
        let (out_labels, n_out) = mesh.component_labels(&outside);
        let n_nodes = n_in + n_out;
        let node_of = |v: usize| -> usize {
            match in_labels[v] {
                Some(c) => c,
                None => n_in + out_labels[v].expect("vertex is in exactly one of the two sets"),
            }
        };

        let mut stats = vec![BranchStats::default(); n_nodes];
        for v in 0..mesh.num_vertices() {
            let node = node_of(v);
            stats[node].mass += self.masses[v];
            stats[node].markers += usize::from(self.is_marker[v]);
        }

        let mut links: Vec<(usize, usize)> = mesh
            .edges()
            .iter()
            .filter(|&&[a, b]| mask[a] != mask[b])
            .map(|&[a, b]| {
                let (p, q) = (node_of(a), node_of(b));
                (p.min(q), p.max(q))
            })
            .collect();
        links.sort_unstable();
        links.dedup();
        if links.len() + 1 != n_nodes {
            return Err(Error::InvariantViolation(format!(
                "component adjacency has {} links for {} components; the surface is not a sphere",
                links.len(),
                n_nodes
            )));
        }

        let mut neighbors = vec![Vec::new(); n_nodes];
        for &(p, q) in &links {
            neighbors[p].push(q);
            neighbors[q].push(p);
        }
        // Root at node 0 and accumulate subtree totals in reverse BFS order.
        let mut parent = vec![usize::MAX; n_nodes];
        let mut order = Vec::with_capacity(n_nodes);
        parent[0] = 0;
        order.push(0);
        let mut head = 0;
        while head < order.len() {
            let p = order[head];
            head += 1;
            for &q in &neighbors[p] {
                if parent[q] == usize::MAX {
                    parent[q] = p;
                    order.push(q);
                }
            }
        }
        if order.len() != n_nodes {
            return Err(Error::InvariantViolation(
                "component adjacency is disconnected".into(),
            ));
        }
        let mut subtree = stats.clone();
        for &p in order.iter().skip(1).rev() {
            let acc = subtree[parent[p]] + subtree[p];
            subtree[parent[p]] = acc;
        }
        let total = subtree[0];

        let mut value: i64 = 0;
        for node in 0..n_in {
            let mut hits: i64 = 0;
            for &q in &neighbors[node] {
                let branch = if parent[q] == node && q != 0 {
                    subtree[q]
                } else {
                    total - subtree[node]
                };
                hits += i64::from(self.base.nu_from_stats(branch));
            }
            let contribution = 1 - hits;
            if !(0..=1).contains(&contribution) {
                return Err(Error::SimplicityViolation(format!(
                    "component {node} contributes {contribution}"
                )));
            }
            value += contribution;
        }
        if !(0..=1).contains(&value) {
            return Err(Error::SimplicityViolation(format!("τ = {value}")));
        }
        Ok(value as u8)
    }
}
