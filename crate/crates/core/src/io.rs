//! JSON graph files.
//!
//! ```json
//! {"vertex_count": 4, "rotation": [[1,3],[2,0],[3,1],[0,2]],
//!  "boundary": [true,true,true,true], "tiling": null}
//! ```
//!
//! `star_edges` is written for information only and ignored on reading; it
//! is recomputed from the faces.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{RotationGraph, Vertex};
use crate::matching::matching_graph;
use crate::tiling::TilingSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertex_count: usize,
    pub rotation: Vec<Vec<Vertex>>,
    pub boundary: Vec<bool>,
    #[serde(default)]
    pub tiling: Option<TilingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star_edges: Option<Vec<(Vertex, Vertex)>>,
}

impl GraphFile {
    pub fn from_graph(g: &RotationGraph, tiling: Option<TilingSpec>, with_star_edges: bool) -> Self {
        let star_edges = with_star_edges.then(|| matching_graph(g).star_edges().collect());
        GraphFile {
            vertex_count: g.vertex_count(),
            rotation: g.rotations(),
            boundary: g.boundary_flags().to_vec(),
            tiling,
            star_edges,
        }
    }

    pub fn to_graph(&self) -> Result<RotationGraph> {
        if self.rotation.len() != self.vertex_count {
            return Err(Error::structural(format!(
                "vertex_count is {} but {} rotations are listed",
                self.vertex_count,
                self.rotation.len()
            )));
        }
        RotationGraph::new(self.rotation.clone(), self.boundary.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn write_graph(path: &Path, g: &RotationGraph, tiling: Option<TilingSpec>) -> Result<()> {
    fs::write(path, GraphFile::from_graph(g, tiling, false).to_json()?)?;
    Ok(())
}

pub fn read_graph(path: &Path) -> Result<(RotationGraph, Option<TilingSpec>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let file = GraphFile::from_json(&text)?;
    Ok((file.to_graph()?, file.tiling))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::{build_ball, fixtures};

    #[test]
    fn round_trip_is_exact() {
        let spec = TilingSpec::new(4, 5, 3);
        let g = build_ball(&spec).unwrap();
        let text = GraphFile::from_graph(&g, Some(spec), false).to_json().unwrap();
        let back = GraphFile::from_json(&text).unwrap();
        assert_eq!(back.tiling, Some(spec));
        let h = back.to_graph().unwrap();
        assert_eq!(h, g);
        assert_eq!(GraphFile::from_graph(&h, Some(spec), false).to_json().unwrap(), text);
    }

    #[test]
    fn star_edges_are_informational() {
        let g = fixtures::square();
        let file = GraphFile::from_graph(&g, None, true);
        assert_eq!(file.star_edges, Some(vec![(0, 2), (1, 3)]));
        assert_eq!(GraphFile::from_json(&file.to_json().unwrap()).unwrap().to_graph().unwrap(), g);
    }

    #[test]
    fn rejects_inconsistent_files() {
        let bad = r#"{"vertex_count": 3, "rotation": [[1],[0]], "boundary": [true,true]}"#;
        assert!(GraphFile::from_json(bad).unwrap().to_graph().is_err());
        let asym = r#"{"vertex_count": 2, "rotation": [[1],[]], "boundary": [true,true]}"#;
        assert!(GraphFile::from_json(asym).unwrap().to_graph().is_err());
        assert!(GraphFile::from_json("{").is_err());
    }
}
