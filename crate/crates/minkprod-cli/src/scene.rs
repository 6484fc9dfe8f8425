//! Scene and matrix files.

use std::collections::BTreeMap;
use std::path::Path;

use minkprod::geom::{c, convex_hull, CScalar, ConvexBody, Disk, Segment};
use minkprod::numrange::{numerical_range_boundary, ComplexMatrix};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
struct SceneFile {
    sets: Vec<SetEntry>,
}

#[derive(Debug, Deserialize)]
struct SetEntry {
    id: String,
    #[serde(flatten)]
    shape: Shape,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Shape {
    Segment { p: [f64; 2], q: [f64; 2] },
    Polygon { vertices: Vec<[f64; 2]> },
    Disk { center: [f64; 2], radius: f64 },
    Matrix(MatrixFile),
}

#[derive(Debug, Clone, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<ComplexMatrix, CliError> {
        if self.entries.len() != self.n {
            return Err(CliError::Input(format!("matrix has {} rows, expected {}", self.entries.len(), self.n)));
        }
        let rows: Vec<Vec<CScalar>> = self.entries.iter().map(|r| r.iter().map(|&z| pt(z)).collect()).collect();
        Ok(ComplexMatrix::from_rows(&rows)?)
    }
}

#[derive(Debug, Clone)]
pub enum SceneItem {
    Body(ConvexBody),
    Matrix(ComplexMatrix),
}

#[derive(Debug, Clone, Default)]
pub struct Scene {
    pub sets: BTreeMap<String, SceneItem>,
}

fn pt(z: [f64; 2]) -> CScalar {
    c(z[0], z[1])
}

fn finite(z: [f64; 2]) -> Result<CScalar, CliError> {
    if z.iter().all(|x| x.is_finite()) {
        Ok(pt(z))
    } else {
        Err(CliError::Input("non-finite coordinate".into()))
    }
}

impl Scene {
    pub fn parse(text: &str) -> Result<Scene, CliError> {
        let file: SceneFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("scene: {e}")))?;
        let mut sets = BTreeMap::new();
        for entry in file.sets {
            let item = match entry.shape {
                Shape::Segment { p, q } => SceneItem::Body(Segment::new(finite(p)?, finite(q)?).into()),
                Shape::Polygon { vertices } => {
                    let v: Vec<CScalar> = vertices.into_iter().map(finite).collect::<Result<_, _>>()?;
                    SceneItem::Body(convex_hull(&v)?.into())
                }
                Shape::Disk { center, radius } => SceneItem::Body(Disk::new(finite(center)?, radius)?.into()),
                Shape::Matrix(m) => SceneItem::Matrix(m.to_matrix()?),
            };
            if sets.insert(entry.id.clone(), item).is_some() {
                return Err(CliError::Input(format!("duplicate id {}", entry.id)));
            }
        }
        Ok(Scene { sets })
    }

    pub fn load(path: &Path) -> Result<Scene, CliError> {
        Scene::parse(&read(path)?)
    }

    /// The body with this id; a matrix resolves to its numerical range.
    pub fn body(&self, id: &str, angles: usize) -> Result<ConvexBody, CliError> {
        match self.sets.get(id) {
            Some(SceneItem::Body(b)) => Ok(b.clone()),
            Some(SceneItem::Matrix(m)) => Ok(numerical_range_boundary(m, angles)?.into()),
            None => Err(CliError::Input(format!("unknown id {id}"))),
        }
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let m: MatrixFile = serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("matrix: {e}")))?;
    m.to_matrix()
}
