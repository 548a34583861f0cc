//! Mesh files (JSON) and field files (one value per line).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ScalarField, SurfaceMesh};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeshFile {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
    pub weights: Vec<f64>,
    #[serde(default)]
    pub markers: Vec<usize>,
}

impl From<&SurfaceMesh> for MeshFile {
    fn from(m: &SurfaceMesh) -> Self {
        MeshFile {
            vertices: m.vertices().to_vec(),
            triangles: m.triangles().to_vec(),
            weights: m.weights().to_vec(),
            markers: m.markers().to_vec(),
        }
    }
}

impl TryFrom<MeshFile> for SurfaceMesh {
    type Error = Error;

    fn try_from(f: MeshFile) -> Result<Self> {
        SurfaceMesh::new(f.vertices, f.triangles, f.weights, f.markers)
    }
}

pub fn mesh_to_json(mesh: &SurfaceMesh) -> Result<String> {
    Ok(serde_json::to_string(&MeshFile::from(mesh))?)
}

pub fn mesh_from_json(text: &str) -> Result<SurfaceMesh> {
    let file: MeshFile = serde_json::from_str(text)?;
    file.try_into()
}

pub fn read_mesh(path: &Path) -> Result<SurfaceMesh> {
    mesh_from_json(&fs::read_to_string(path)?)
}

pub fn write_mesh(path: &Path, mesh: &SurfaceMesh) -> Result<()> {
    fs::write(path, mesh_to_json(mesh)?)?;
    Ok(())
}

/// One value per line, row `i` = vertex `i`. Values use the shortest
/// representation that round-trips.
pub fn field_to_csv(field: &ScalarField) -> String {
    let mut out = String::with_capacity(field.len() * 20);
    for v in field.values() {
        out.push_str(&format!("{v}\n"));
    }
    out
}

pub fn field_from_csv(text: &str, mesh: &SurfaceMesh) -> Result<ScalarField> {
    let values = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    ScalarField::new(mesh, values)
}

pub fn read_field(path: &Path, mesh: &SurfaceMesh) -> Result<ScalarField> {
    field_from_csv(&fs::read_to_string(path)?, mesh)
}

pub fn write_field(path: &Path, field: &ScalarField) -> Result<()> {
    fs::write(path, field_to_csv(field))?;
    Ok(())
}
