//! Many-to-one maps of the form h(ax^q + bx + c) + ux^q + vx over F_{q^2}.

pub mod error;
pub mod closed_form;
pub mod family;
pub mod field;
pub mod inverse;
pub mod involution;
pub mod oracle;
pub mod poly;
pub mod reduction;
pub mod sweep;
pub mod verdict;

pub use error::{Error, Result};
