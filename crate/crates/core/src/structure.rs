//! Finite magmas with a distinguished self-map.
//!
//! Elements of a carrier of size `n` are the indices `0..n`. Tables are stored
//! row-major: `table[x * n + y]` is the product of `x` and `y`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest carrier representable with `u8` element indices.
pub const MAX_SIZE: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("carrier must be non-empty")]
    Empty,
    #[error("carrier size {0} exceeds the maximum of {MAX_SIZE}")]
    TooLarge(usize),
    #[error("table must have {expected} rows of {expected} entries")]
    TableShape { expected: usize },
    #[error("alpha has length {found}, expected {expected}")]
    AlphaLength { expected: usize, found: usize },
    #[error("index out of range: {what} entry {value} is not below size {size}")]
    IndexOutOfRange {
        what: &'static str,
        value: usize,
        size: usize,
    },
}

/// A binary operation on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table {
    size: usize,
    cells: Vec<u8>,
}

impl Table {
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, StructureError> {
        let n = rows.len();
        check_size(n)?;
        if rows.iter().any(|r| r.len() != n) {
            return Err(StructureError::TableShape { expected: n });
        }
        let cells = rows
            .iter()
            .flatten()
            .map(|&v| to_index("table", v, n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { size: n, cells })
    }

    pub fn from_flat(size: usize, cells: Vec<u8>) -> Result<Self, StructureError> {
        check_size(size)?;
        if cells.len() != size * size {
            return Err(StructureError::TableShape { expected: size });
        }
        if let Some(&v) = cells.iter().find(|&&v| v as usize >= size) {
            return Err(StructureError::IndexOutOfRange {
                what: "table",
                value: v as usize,
                size,
            });
        }
        Ok(Self { size, cells })
    }

    /// Caller guarantees the shape and range invariants.
    pub(crate) fn from_flat_unchecked(size: usize, cells: Vec<u8>) -> Self {
        debug_assert_eq!(cells.len(), size * size);
        Self { size, cells }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.size + y] as usize
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.cells
            .chunks(self.size)
            .map(|r| r.iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// First triple `(x, y, z)` with `(xy)z != x(yz)`, in lexicographic order.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.size;
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn is_associative(&self) -> bool {
        self.associativity_violation().is_none()
    }

    pub fn transpose(&self) -> Self {
        let n = self.size;
        let mut cells = vec![0u8; n * n];
        for x in 0..n {
            for y in 0..n {
                cells[y * n + x] = self.cells[x * n + y];
            }
        }
        Self { size: n, cells }
    }

    /// Applies `f` to every entry.
    pub(crate) fn map_entries(&self, f: impl Fn(usize) -> usize) -> Self {
        Self {
            size: self.size,
            cells: self.cells.iter().map(|&v| f(v as usize) as u8).collect(),
        }
    }
}

impl fmt::Debug for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl Serialize for Table {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Table {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<usize>>::deserialize(deserializer)?;
        Table::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// The triple `(A, ⋆, α)`: a raw magma on `0..n` together with a self-map.
///
/// No closure or associativity property is assumed. Ordering is by
/// `(table, alpha)`, which is the order used for canonical forms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "StructureJson", into = "StructureJson")]
pub struct FiniteHomStructure {
    table: Table,
    alpha: Vec<u8>,
}

impl FiniteHomStructure {
    pub fn new(table: Table, alpha: Vec<usize>) -> Result<Self, StructureError> {
        let n = table.size();
        if alpha.len() != n {
            return Err(StructureError::AlphaLength {
                expected: n,
                found: alpha.len(),
            });
        }
        let alpha = alpha
            .into_iter()
            .map(|v| to_index("alpha", v, n))
            .collect::<Result<_, _>>()?;
        Ok(Self { table, alpha })
    }

    pub fn from_rows(rows: &[Vec<usize>], alpha: &[usize]) -> Result<Self, StructureError> {
        Self::new(Table::from_rows(rows)?, alpha.to_vec())
    }

    pub(crate) fn from_parts_unchecked(table: Table, alpha: Vec<u8>) -> Self {
        debug_assert_eq!(table.size(), alpha.len());
        Self { table, alpha }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.table.size
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table.mul(x, y)
    }

    #[inline]
    pub fn alpha(&self, x: usize) -> usize {
        self.alpha[x] as usize
    }

    pub fn table(&self) -> &Table {
        &self.table
    }

    pub fn alpha_map(&self) -> Vec<usize> {
        self.alpha.iter().map(|&v| v as usize).collect()
    }

    pub(crate) fn alpha_raw(&self) -> &[u8] {
        &self.alpha
    }
}

impl fmt::Debug for FiniteHomStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteHomStructure")
            .field("table", &self.table)
            .field("alpha", &self.alpha)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    size: usize,
    table: Vec<Vec<usize>>,
    alpha: Vec<usize>,
}

impl TryFrom<StructureJson> for FiniteHomStructure {
    type Error = StructureError;

    fn try_from(raw: StructureJson) -> Result<Self, Self::Error> {
        check_size(raw.size)?;
        if raw.table.len() != raw.size {
            return Err(StructureError::TableShape { expected: raw.size });
        }
        Self::from_rows(&raw.table, &raw.alpha)
    }
}

impl From<FiniteHomStructure> for StructureJson {
    fn from(h: FiniteHomStructure) -> Self {
        StructureJson {
            size: h.size(),
            table: h.table.rows(),
            alpha: h.alpha_map(),
        }
    }
}

/// A right inverse `β` of `α`, i.e. `α(β(x)) = x` for every `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Section {
    beta: Vec<usize>,
}

impl Section {
    /// Validates `α∘β = id` against the twisting map of `h`.
    pub fn new(h: &FiniteHomStructure, beta: Vec<usize>) -> Result<Self, crate::HomError> {
        if beta.len() != h.size() {
            return Err(crate::HomError::SizeMismatch {
                expected: h.size(),
                found: beta.len(),
            });
        }
        if let Some(x) = (0..h.size()).find(|&x| beta[x] >= h.size() || h.alpha(beta[x]) != x) {
            return Err(crate::HomError::InvalidSection { x });
        }
        Ok(Self { beta })
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.beta[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.beta
    }
}

fn check_size(n: usize) -> Result<(), StructureError> {
    match n {
        0 => Err(StructureError::Empty),
        n if n > MAX_SIZE => Err(StructureError::TooLarge(n)),
        _ => Ok(()),
    }
}

fn to_index(what: &'static str, value: usize, size: usize) -> Result<u8, StructureError> {
    if value < size {
        Ok(value as u8)
    } else {
        Err(StructureError::IndexOutOfRange { what, value, size })
    }
}
