use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown space kind `{0}`")]
    UnknownKind(String),
    #[error("invalid space spec: {0}")]
    InvalidSpec(String),
    #[error("vertex {0} is not a vertex of this space")]
    NoSuchVertex(String),
    #[error("radius {requested} exceeds the oracle horizon {horizon}")]
    HorizonExceeded { requested: u32, horizon: u32 },
    #[error("radius ordering violated: need R < horizon, got R={r}, horizon={horizon}")]
    RadiusOrder { r: u32, horizon: u32 },
    #[error("vertices are not connected within the search window")]
    Disconnected,
    #[error("adjacency is not symmetric: {0} lists {1} but not conversely")]
    AsymmetricEdge(String, String),
    #[error("degree bound {bound} exceeded at vertex {vertex}")]
    DegreeExceeded { vertex: String, bound: u32 },
    #[error("invalid ray: {0}")]
    InvalidRay(String),
    #[error("properness not certifiable on the window: {0}")]
    PropernessEvidence(String),
    #[error("trace has no usable pairs at radius {0}")]
    EmptyTrace(u32),
    #[error("traces share no inputs")]
    DisjointTraces,
    #[error("endrays do not match at height {0}")]
    EndrayMismatch(u32),
    #[error("malformed lattice table: {0}")]
    MalformedLattice(String),
    #[error("cycle detected near {0}; space is not a tree")]
    CycleDetected(String),
    #[error("chain extraction ambiguous at depth {0}")]
    AmbiguousChain(u32),
    #[error("not a {stride}-path: step {index} has length {len}")]
    NotAPath { stride: u32, index: usize, len: u32 },
    #[error("row {row} has {len} points; stride {stride} allows at most {allowed}")]
    RowBudget { row: u32, len: usize, stride: u32, allowed: usize },
    #[error("ball radius {0} is not below the least crossed step height {1}")]
    BallRadiusTooLarge(u32, u32),
    #[error("stable behavior word is empty; no refutation available")]
    StableWordEmpty,
    #[error("no stable behavior word: {0}")]
    NoStableWord(String),
    #[error("space is not a staircase")]
    NotStaircase,
    #[error("mesh too coarse: {0}")]
    MeshTooCoarse(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("profile spans {0} radii; at least {1} required")]
    ProfileTooShort(usize, usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
