mod group;
mod homology;
mod matrix;

pub use group::*;
pub use homology::*;
pub use matrix::*;
