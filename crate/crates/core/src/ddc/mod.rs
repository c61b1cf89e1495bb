//! Decorated diagram codes: the data model, the text format, validation and
//! the primitive surgeries.

mod model;
mod ops;
mod parse;
mod serialize;
mod validate;

pub use model::*;
pub use ops::*;
pub use parse::{group_items, parse_core_event, parse_ddc, parse_sign, parse_slot_ref, strip_comment, tokenize, ParseError, Side};
pub(crate) use parse::parse_generic;
pub use serialize::{band_line, component_line, core_event_text, crossing_line, piercing_line, vertex_line};
