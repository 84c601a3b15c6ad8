pub mod entanglement;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod generators;
pub mod homodyne;
pub mod linalg;
pub mod measures;
pub mod recipe;
pub mod symplectic;
pub mod tolerances;

pub use entanglement::{EntanglementReport, Region};
pub use error::{CvError, Result};
pub use gaussian::{GaussianState, PhysicalityReport, StandardFormParams};
pub use measures::{FidelityResult, OverlapKind, PurityResult};
pub use recipe::{Recipe, Step};
pub use symplectic::{apply_loss, displace, SymplecticMap};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
