pub mod path;
pub mod poly;
pub mod track;

pub use path::{LoopPath, Segment};
pub use poly::{solve_fiber_roots, UniPoly};
pub use track::{
    min_separation, track_loop, track_loop_observed, CrossingEvent, FiberFamily, PolyFamily,
    Projection, TrackedFiber, TrackerConfig,
};
