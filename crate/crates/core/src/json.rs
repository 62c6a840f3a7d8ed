//! JSON input and output. Floats are written in scientific notation with 17
//! significant digits so that every `f64` round-trips exactly.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::maps::MatrixSpaceMap;

/// Pretty printer that writes finite floats as `{:.16e}` and non-finite
/// ones as `null`.
struct Exact<'a>(PrettyFormatter<'a>);

impl Formatter for Exact<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Exact(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::InvalidArgument(format!("malformed JSON: {e}"))
}

/// Reads `{"n": int, "entries": [...]}` as a square matrix with `n >= 1`.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let m: Matrix = serde_json::from_str(text).map_err(parse_error)?;
    if m.rows() == 0 || !m.is_square() {
        return Err(Error::InvalidArgument(format!("expected a nonempty square matrix, got {}x{}", m.rows(), m.cols())));
    }
    Ok(m)
}

/// Reads `{"n": int, "big": [...]}` with `n^4` row-major entries.
pub fn parse_map(text: &str) -> Result<MatrixSpaceMap> {
    serde_json::from_str(text).map_err(parse_error)
}
