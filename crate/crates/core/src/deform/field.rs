//! Dense linear algebra over a prime field `F_p`.
//!
//! Matrices act on column vectors: `(M v)_i = Σ_j M[i][j] v_j`, so column `j`
//! is the image of the basis vector `e_j`. Bilinear maps are stored as
//! structure constants: `B[i][j][k]` is the coefficient of `e_k` in
//! `B(e_i, e_j)`.

use std::fmt;

use rand::Rng;

use super::DeformError;

/// Largest accepted modulus; keeps every product inside `u64`.
pub const MAX_PRIME: u32 = 65_521;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, DeformError> {
        let is_prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
        if !is_prime || p > MAX_PRIME {
            return Err(DeformError::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, v: u64) -> u32 {
        (v % self.p as u64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn inv(self, a: u32) -> Option<u32> {
        if a % self.p == 0 {
            return None;
        }
        // Fermat: a^(p-2).
        let (mut base, mut exp, mut acc) = (a % self.p, self.p - 2, 1u32);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        Some(acc)
    }

    pub fn random(self, rng: &mut impl Rng) -> u32 {
        rng.random_range(0..self.p)
    }
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// Adds `b` into `a` coordinatewise.
pub(crate) fn add_assign(f: PrimeField, a: &mut [u32], b: &[u32]) {
    for (x, &y) in a.iter_mut().zip(b) {
        *x = f.add(*x, y);
    }
}

pub(crate) fn basis(dim: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    dim: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zero(field: PrimeField, dim: usize) -> Self {
        Self {
            field,
            dim,
            data: vec![0; dim * dim],
        }
    }

    pub fn identity(field: PrimeField, dim: usize) -> Self {
        let mut m = Self::zero(field, dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1;
        }
        m
    }

    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Result<Self, DeformError> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(DeformError::Shape("matrix must be square and non-empty"));
        }
        let data = rows.iter().flatten().copied().collect();
        Self::from_flat(field, dim, data)
    }

    pub fn from_flat(field: PrimeField, dim: usize, data: Vec<u32>) -> Result<Self, DeformError> {
        if data.len() != dim * dim {
            return Err(DeformError::Shape("matrix has wrong number of entries"));
        }
        if let Some(&v) = data.iter().find(|&&v| v >= field.modulus()) {
            return Err(DeformError::EntryOutOfRange {
                value: v,
                p: field.modulus(),
            });
        }
        Ok(Self { field, dim, data })
    }

    pub fn random(field: PrimeField, dim: usize, rng: &mut impl Rng) -> Self {
        Self {
            field,
            dim,
            data: (0..dim * dim).map(|_| field.random(rng)).collect(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.dim + j] = self.field.reduce(v as u64);
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.data.chunks(self.dim).map(<[u32]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        (0..self.dim)
            .map(|i| {
                let s: u64 = (0..self.dim)
                    .map(|j| self.get(i, j) as u64 * v[j] as u64)
                    .sum();
                f.reduce(s)
            })
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Matrix) -> Matrix {
        let d = self.dim;
        let mut out = Matrix::zero(self.field, d);
        for i in 0..d {
            for j in 0..d {
                let s: u64 = (0..d)
                    .map(|k| self.get(i, k) as u64 * other.get(k, j) as u64)
                    .sum();
                out.data[i * d + j] = self.field.reduce(s);
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let mut out = self.clone();
        add_assign(self.field, &mut out.data, &other.data);
        out
    }

    pub fn neg(&self) -> Matrix {
        let f = self.field;
        Matrix {
            field: f,
            dim: self.dim,
            data: self.data.iter().map(|&v| f.neg(v)).collect(),
        }
    }

    /// Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        let f = self.field;
        let d = self.dim;
        let mut a = self.clone();
        let mut inv = Matrix::identity(f, d);
        for col in 0..d {
            let pivot = (col..d).find(|&r| a.get(r, col) != 0)?;
            if pivot != col {
                for j in 0..d {
                    a.data.swap(pivot * d + j, col * d + j);
                    inv.data.swap(pivot * d + j, col * d + j);
                }
            }
            let scale = f.inv(a.get(col, col))?;
            for j in 0..d {
                a.data[col * d + j] = f.mul(a.data[col * d + j], scale);
                inv.data[col * d + j] = f.mul(inv.data[col * d + j], scale);
            }
            for r in (0..d).filter(|&r| r != col) {
                let factor = a.get(r, col);
                if factor == 0 {
                    continue;
                }
                for j in 0..d {
                    a.data[r * d + j] =
                        f.sub(a.data[r * d + j], f.mul(factor, a.data[col * d + j]));
                    inv.data[r * d + j] =
                        f.sub(inv.data[r * d + j], f.mul(factor, inv.data[col * d + j]));
                }
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        rank(self.field, self.dim, self.data.clone()) == self.dim
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// Rank of a row-major `rows × cols` matrix.
pub(crate) fn rank(f: PrimeField, cols: usize, mut data: Vec<u32>) -> usize {
    let rows = data.len() / cols;
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        for j in 0..cols {
            data.swap(p * cols + j, r * cols + j);
        }
        let inv = f.inv(data[r * cols + c]).expect("nonzero pivot");
        for i in (0..rows).filter(|&i| i != r) {
            let factor = f.mul(data[i * cols + c], inv);
            if factor == 0 {
                continue;
            }
            for j in 0..cols {
                data[i * cols + j] = f.sub(data[i * cols + j], f.mul(factor, data[r * cols + j]));
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// A nonzero vector in the kernel of a row-major `rows × cols` matrix.
pub(crate) fn kernel_vector(f: PrimeField, cols: usize, mut data: Vec<u32>) -> Option<Vec<u32>> {
    let rows = data.len() / cols;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        for j in 0..cols {
            data.swap(p * cols + j, r * cols + j);
        }
        let inv = f.inv(data[r * cols + c]).expect("nonzero pivot");
        for j in 0..cols {
            data[r * cols + j] = f.mul(data[r * cols + j], inv);
        }
        for i in (0..rows).filter(|&i| i != r) {
            let factor = data[i * cols + c];
            if factor == 0 {
                continue;
            }
            for j in 0..cols {
                data[i * cols + j] = f.sub(data[i * cols + j], f.mul(factor, data[r * cols + j]));
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![0u32; cols];
    v[free] = 1;
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = f.neg(data[row * cols + free]);
    }
    Some(v)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bilinear {
    field: PrimeField,
    dim: usize,
    data: Vec<u32>,
}

impl Bilinear {
    pub fn zero(field: PrimeField, dim: usize) -> Self {
        Self {
            field,
            dim,
            data: vec![0; dim * dim * dim],
        }
    }

    pub fn from_nested(field: PrimeField, t: &[Vec<Vec<u32>>]) -> Result<Self, DeformError> {
        let dim = t.len();
        if dim == 0
            || t.iter()
                .any(|m| m.len() != dim || m.iter().any(|r| r.len() != dim))
        {
            return Err(DeformError::Shape("tensor must be d×d×d and non-empty"));
        }
        Self::from_flat(field, dim, t.iter().flatten().flatten().copied().collect())
    }

    pub fn from_flat(field: PrimeField, dim: usize, data: Vec<u32>) -> Result<Self, DeformError> {
        if data.len() != dim * dim * dim {
            return Err(DeformError::Shape("tensor has wrong number of entries"));
        }
        if let Some(&v) = data.iter().find(|&&v| v >= field.modulus()) {
            return Err(DeformError::EntryOutOfRange {
                value: v,
                p: field.modulus(),
            });
        }
        Ok(Self { field, dim, data })
    }

    /// Builds a bilinear map from its values on basis pairs.
    pub fn from_fn(field: PrimeField, dim: usize, f: impl Fn(usize, usize) -> Vec<u32>) -> Self {
        let mut data = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.extend(f(i, j));
            }
        }
        Self { field, dim, data }
    }

    pub fn random(field: PrimeField, dim: usize, rng: &mut impl Rng) -> Self {
        Self {
            field,
            dim,
            data: (0..dim * dim * dim).map(|_| field.random(rng)).collect(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    #[cfg(test)]
    pub(crate) fn entries_mut(&mut self) -> &mut [u32] {
        &mut self.data
    }

    pub fn nested(&self) -> Vec<Vec<Vec<u32>>> {
        self.data
            .chunks(self.dim * self.dim)
            .map(|m| m.chunks(self.dim).map(<[u32]>::to_vec).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// `B(e_i, e_j)`.
    pub fn on_basis(&self, i: usize, j: usize) -> &[u32] {
        let start = (i * self.dim + j) * self.dim;
        &self.data[start..start + self.dim]
    }

    pub fn apply(&self, u: &[u32], v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let d = self.dim;
        let mut acc = vec![0u64; d];
        for i in (0..d).filter(|&i| u[i] != 0) {
            for j in (0..d).filter(|&j| v[j] != 0) {
                let c = f.mul(u[i], v[j]) as u64;
                for (k, a) in acc.iter_mut().enumerate() {
                    *a += c * self.on_basis(i, j)[k] as u64;
                }
            }
        }
        acc.into_iter().map(|a| f.reduce(a)).collect()
    }

    pub fn add(&self, other: &Bilinear) -> Bilinear {
        let mut out = self.clone();
        add_assign(self.field, &mut out.data, &other.data);
        out
    }

    /// `m ∘ B`.
    pub fn post_compose(&self, m: &Matrix) -> Bilinear {
        Bilinear::from_fn(self.field, self.dim, |i, j| m.apply(self.on_basis(i, j)))
    }

    /// `B ∘ (m ⊗ m)`.
    pub fn pre_compose(&self, m: &Matrix) -> Bilinear {
        let cols: Vec<Vec<u32>> = (0..self.dim)
            .map(|j| m.apply(&basis(self.dim, j)))
            .collect();
        Bilinear::from_fn(self.field, self.dim, |i, j| self.apply(&cols[i], &cols[j]))
    }

    /// First basis triple `(x, y, z)` with `(xy)z != x(yz)`.
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let d = self.dim;
        let e = |i| basis(d, i);
        for x in 0..d {
            for y in 0..d {
                let xy = self.on_basis(x, y).to_vec();
                for z in 0..d {
                    if self.apply(&xy, &e(z)) != self.apply(&e(x), self.on_basis(y, z)) {
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
}

impl fmt::Debug for Bilinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.nested()).finish()
    }
}
