//! Self-describing JSON matrix files.
//!
//! ```json
//! {
//!   "format": "ence-matrix",
//!   "header": {"vec": "column-stacking", "major": "A-slow", "order": "row-major", "complex": "[re, im]"},
//!   "kind": "density",
//!   "dim": 4,
//!   "dims": [2, 2],
//!   "data": [[0.5, 0.0], [0.0, 0.0], ...]
//! }
//! ```
//!
//! `data` lists the `dim²` entries row by row as `[re, im]` pairs.

use std::fs;
use std::io;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{BipartiteDims, CMatrix, DensityMatrix};
use crate::maps::Superoperator;
use crate::tol::Tolerances;

pub const FORMAT_NAME: &str = "ence-matrix";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Density,
    Superoperator,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub vec: String,
    pub major: String,
    pub order: String,
    pub complex: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Self {
            vec: "column-stacking".into(),
            major: "A-slow".into(),
            order: "row-major".into(),
            complex: "[re, im]".into(),
        }
    }
}

fn default_format() -> String {
    FORMAT_NAME.to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    #[serde(default = "default_format")]
    pub format: String,
    #[serde(default)]
    pub header: Conventions,
    pub kind: MatrixKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<[usize; 2]>,
    pub data: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(kind: MatrixKind, m: &CMatrix, dims: Option<BipartiteDims>) -> Self {
        Self {
            format: default_format(),
            header: Conventions::default(),
            kind,
            dim: m.dim(),
            dims: dims.map(|d| [d.d_a, d.d_b]),
            data: m.to_row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_density(rho: &DensityMatrix, dims: Option<BipartiteDims>) -> Self {
        Self::from_matrix(MatrixKind::Density, rho.as_cmatrix(), dims)
    }

    pub fn from_superoperator(l: &Superoperator) -> Self {
        Self::from_matrix(MatrixKind::Superoperator, l.matrix(), None)
    }

    pub fn bipartite_dims(&self) -> Result<Option<BipartiteDims>> {
        self.dims.map(|[a, b]| BipartiteDims::new(a, b)).transpose()
    }

    /// Checks the format tag, conventions, shape, and finiteness.
    pub fn to_cmatrix(&self) -> Result<CMatrix> {
        if self.format != FORMAT_NAME {
            return Err(Error::Format(format!("unknown format tag {:?}", self.format)));
        }
        let expected = Conventions::default();
        if self.header != expected {
            return Err(Error::Format(format!(
                "unsupported conventions {:?}, expected {:?}",
                self.header, expected
            )));
        }
        if self.dim == 0 {
            return Err(Error::Format("dim must be positive".into()));
        }
        if self.data.len() != self.dim * self.dim {
            return Err(Error::Format(format!(
                "data has {} entries, expected dim² = {}",
                self.data.len(),
                self.dim * self.dim
            )));
        }
        if let Some(dims) = self.bipartite_dims()? {
            if dims.total() != self.dim {
                return Err(Error::Format(format!(
                    "dims {dims} do not multiply to dim {}",
                    self.dim
                )));
            }
        }
        let entries: Vec<Complex64> = self.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        CMatrix::from_row_major(self.dim, &entries).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_density(&self, tol: &Tolerances) -> Result<DensityMatrix> {
        DensityMatrix::with_tolerances(self.to_cmatrix()?, tol)
    }

    pub fn to_superoperator(&self) -> Result<Superoperator> {
        Superoperator::new(self.to_cmatrix()?)
    }

    /// Validates the invariants of the declared kind.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        match self.kind {
            MatrixKind::Density => self.to_density(tol).map(drop),
            MatrixKind::Superoperator => self.to_superoperator().map(drop),
            MatrixKind::General => self.to_cmatrix().map(drop),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        to_json_pretty(self)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n")
            .map_err(|e| Error::Format(format!("cannot write {}: {e}", path.display())))
    }
}

/// Indented JSON in which arrays nested directly inside arrays (such as
/// `[re, im]` pairs) stay on one line.
pub fn to_json_pretty<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, PairFormatter::default());
    value.serialize(&mut ser).expect("value serializes to JSON");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

struct Frame {
    is_array: bool,
    compact: bool,
    has_value: bool,
}

#[derive(Default)]
struct PairFormatter {
    stack: Vec<Frame>,
}

impl PairFormatter {
    fn open<W: io::Write + ?Sized>(&mut self, w: &mut W, is_array: bool) -> io::Result<()> {
        let compact = self
            .stack
            .last()
            .is_some_and(|f| f.compact || (f.is_array && is_array));
        self.stack.push(Frame { is_array, compact, has_value: false });
        w.write_all(if is_array { b"[" } else { b"{" })
    }

    fn close<W: io::Write + ?Sized>(&mut self, w: &mut W) -> io::Result<()> {
        let frame = self.stack.pop().expect("balanced containers");
        if !frame.compact && frame.has_value {
            self.newline(w)?;
        }
        w.write_all(if frame.is_array { b"]" } else { b"}" })
    }

    fn newline<W: io::Write + ?Sized>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..self.stack.len() {
            w.write_all(b"  ")?;
        }
        Ok(())
    }

    fn item<W: io::Write + ?Sized>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        let frame = self.stack.last_mut().expect("inside a container");
        frame.has_value = true;
        if frame.compact {
            if !first {
                w.write_all(b", ")?;
            }
            Ok(())
        } else {
            if !first {
                w.write_all(b",")?;
            }
            self.newline(w)
        }
    }
}

impl serde_json::ser::Formatter for PairFormatter {
    fn begin_array<W: io::Write + ?Sized>(&mut self, w: &mut W) -> io::Result<()> {
        self.open(w, true)
    }

    fn end_array<W: io::Write + ?Sized>(&mut self, w: &mut W) -> io::Result<()> {
        self.close(w)
    }

    fn begin_array_value<W: io::Write + ?Sized>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.item(w, first)
    }

    fn begin_object<W: io::Write + ?Sized>(&mut self, w: &mut W) -> io::Result<()> {
        self.open(w, false)
    }

    fn end_object<W: io::Write + ?Sized>(&mut self, w: &mut W) -> io::Result<()> {
        self.close(w)
    }

    fn begin_object_key<W: io::Write + ?Sized>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.item(w, first)
    }

    fn begin_object_value<W: io::Write + ?Sized>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}
