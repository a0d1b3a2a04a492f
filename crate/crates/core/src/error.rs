use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("hierarchy has no root")]
    NoRoot,
    #[error("hierarchy has multiple roots ({0} and {1})")]
    MultipleRoots(usize, usize),
    #[error("parent of vertex {vertex} is out of range ({parent})")]
    ParentOutOfRange { vertex: usize, parent: usize },
    #[error("parent links contain a cycle through vertex {0}")]
    Cycle(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("duplicate bridge ({0}, {1})")]
    DuplicateBridge(usize, usize),
    #[error("rectangle family is not laminar")]
    NotLaminar,
    #[error("point set {set} has {size} points, limit is {limit}")]
    OversizedSet { set: usize, size: usize, limit: usize },
    #[error("coordinate {0} out of range")]
    CoordinateOutOfRange(u64),
    #[error("malformed instance at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
