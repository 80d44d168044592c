//! Simple triple systems TS(2n+2, λ) built class by class, together with a
//! cyclic listing of their blocks in which consecutive blocks share exactly
//! two points.

pub mod assemble;
pub mod big;
pub mod cube;
pub mod design;
pub mod error;
pub mod honeycomb;
pub mod infinity;
pub mod modular;
pub mod verify;

pub use assemble::{assemble, component_census, Census, GrayCode};
pub use design::{
    arcs_of, schreiber_class, union_design, Arc, ArcColoring, Block, BlockOrigin, Color, Point,
    Step, TripleSystem,
};
pub use error::{Error, Result};
