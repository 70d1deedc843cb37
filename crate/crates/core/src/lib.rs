pub mod constructions;
pub mod error;
pub mod fields;
pub mod hypersurface;
pub mod linalg;
pub mod poly;
pub mod sheaf_p1;

pub use error::{Error, ErrorKind, Result};
pub use fields::{make_field, FieldSpec, Scalar};
pub use poly::{BinaryForm, LaurentForm, MultiPoly};
