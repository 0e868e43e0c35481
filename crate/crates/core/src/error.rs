use thiserror::Error;

/// Errors raised while building, reading or processing a mesh.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mesh has no triangles")]
    NoTriangles,

    #[error("triangle {triangle} references vertex {vertex}, but the mesh has {n_vert} vertices")]
    IndexOutOfRange {
        triangle: usize,
        vertex: usize,
        n_vert: usize,
    },

    #[error("triangle {triangle} repeats vertex {vertex}")]
    DuplicateVertex { triangle: usize, vertex: usize },

    #[error("{file} line {line}: {message}")]
    Parse {
        file: &'static str,
        line: usize,
        message: String,
    },

    #[error("vertex {0} has no incident triangles")]
    NoIncidentTriangles(usize),

    #[error("topology has not been built for this mesh")]
    TopologyMissing,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("mesh generation failed: {0}")]
    Generation(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(file: &'static str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            file,
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}
