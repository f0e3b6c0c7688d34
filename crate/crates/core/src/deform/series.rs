//! Power series in `t` truncated modulo `t^(N+1)`, with matrix, bilinear or
//! vector coefficients.

use rand::Rng;

use super::field::{add_assign, basis, Bilinear, Matrix, PrimeField};
use super::DeformError;

/// `Σ tⁱ v_i` for vectors `v_i ∈ F_p^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorSeries {
    pub coeffs: Vec<Vec<u32>>,
}

impl VectorSeries {
    pub fn zero(dim: usize, order: usize) -> Self {
        Self {
            coeffs: vec![vec![0; dim]; order + 1],
        }
    }

    /// The constant series `e_i`.
    pub fn basis(dim: usize, order: usize, i: usize) -> Self {
        let mut s = Self::zero(dim, order);
        s.coeffs[0] = basis(dim, i);
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|&v| v == 0)
    }

    /// Index and value of the lowest-order nonzero coefficient.
    pub fn leading(&self) -> Option<(usize, &[u32])> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| c.iter().any(|&v| v != 0))
            .map(|(k, c)| (k, c.as_slice()))
    }

    pub fn sub(&self, other: &VectorSeries, f: PrimeField) -> VectorSeries {
        VectorSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect())
                .collect(),
        }
    }
}

/// `α_t = Σ tⁱ α_i` truncated at order `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSeries {
    coeffs: Vec<Matrix>,
}

impl LinearSeries {
    pub fn new(coeffs: Vec<Matrix>) -> Result<Self, DeformError> {
        let first = coeffs
            .first()
            .ok_or(DeformError::Shape("series needs a degree-zero term"))?;
        let (f, d) = (first.field(), first.dim());
        if coeffs.iter().any(|m| m.field() != f || m.dim() != d) {
            return Err(DeformError::Shape(
                "series coefficients disagree in field or dimension",
            ));
        }
        Ok(Self { coeffs })
    }

    /// `m` in degree zero and nothing above.
    pub fn constant(m: Matrix, order: usize) -> Self {
        let zero = Matrix::zero(m.field(), m.dim());
        let mut coeffs = vec![zero; order + 1];
        coeffs[0] = m;
        Self { coeffs }
    }

    pub fn identity(field: PrimeField, dim: usize, order: usize) -> Self {
        Self::constant(Matrix::identity(field, dim), order)
    }

    pub fn random(field: PrimeField, dim: usize, order: usize, rng: &mut impl Rng) -> Self {
        Self {
            coeffs: (0..=order)
                .map(|_| Matrix::random(field, dim, rng))
                .collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn field(&self) -> PrimeField {
        self.coeffs[0].field()
    }

    pub fn coeffs(&self) -> &[Matrix] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Matrix {
        &self.coeffs[k]
    }

    pub(crate) fn coeff_mut(&mut self, k: usize) -> &mut Matrix {
        &mut self.coeffs[k]
    }

    /// `(self ∘ other)_k = Σ_{i+j=k} self_i ∘ other_j`.
    pub fn compose(&self, other: &LinearSeries) -> LinearSeries {
        let (f, d) = (self.field(), self.dim());
        let coeffs = (0..=self.order())
            .map(|k| {
                (0..=k).fold(Matrix::zero(f, d), |acc, i| {
                    acc.add(&self.coeffs[i].compose(&other.coeffs[k - i]))
                })
            })
            .collect();
        LinearSeries { coeffs }
    }

    /// Two-sided inverse modulo `t^(N+1)`, by the order-by-order recursion
    /// `r_0 = α_0⁻¹`, `r_k = −α_0⁻¹ Σ_{i=1..k} α_i r_{k−i}`.
    pub fn invert(&self) -> Result<LinearSeries, DeformError> {
        let lead_inv = self.coeffs[0]
            .inverse()
            .ok_or(DeformError::SingularLeadingTerm)?;
        let (f, d) = (self.field(), self.dim());
        let mut r: Vec<Matrix> = vec![lead_inv.clone()];
        for k in 1..=self.order() {
            let acc = (1..=k).fold(Matrix::zero(f, d), |acc, i| {
                acc.add(&self.coeffs[i].compose(&r[k - i]))
            });
            r.push(lead_inv.compose(&acc).neg());
        }
        Ok(LinearSeries { coeffs: r })
    }

    pub fn apply(&self, v: &VectorSeries) -> VectorSeries {
        let (f, d) = (self.field(), self.dim());
        let mut out = VectorSeries::zero(d, self.order());
        for i in 0..=self.order() {
            for j in 0..=self.order() - i {
                add_assign(
                    f,
                    &mut out.coeffs[i + j],
                    &self.coeffs[i].apply(&v.coeffs[j]),
                );
            }
        }
        out
    }
}

/// `μ_t = Σ tⁱ μ_i` truncated at order `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearSeries {
    coeffs: Vec<Bilinear>,
}

impl BilinearSeries {
    pub fn new(coeffs: Vec<Bilinear>) -> Result<Self, DeformError> {
        let first = coeffs
            .first()
            .ok_or(DeformError::Shape("series needs a degree-zero term"))?;
        let (f, d) = (first.field(), first.dim());
        if coeffs.iter().any(|m| m.field() != f || m.dim() != d) {
            return Err(DeformError::Shape(
                "series coefficients disagree in field or dimension",
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(b: Bilinear, order: usize) -> Self {
        let zero = Bilinear::zero(b.field(), b.dim());
        let mut coeffs = vec![zero; order + 1];
        coeffs[0] = b;
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn field(&self) -> PrimeField {
        self.coeffs[0].field()
    }

    pub fn coeffs(&self) -> &[Bilinear] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &Bilinear {
        &self.coeffs[k]
    }

    pub(crate) fn coeff_mut(&mut self, k: usize) -> &mut Bilinear {
        &mut self.coeffs[k]
    }

    /// `μ_t(u_t, v_t)` truncated.
    pub fn apply(&self, u: &VectorSeries, v: &VectorSeries) -> VectorSeries {
        let (f, d, n) = (self.field(), self.dim(), self.order());
        let mut out = VectorSeries::zero(d, n);
        for i in 0..=n {
            for j in 0..=n - i {
                for l in 0..=n - i - j {
                    add_assign(
                        f,
                        &mut out.coeffs[i + j + l],
                        &self.coeffs[i].apply(&u.coeffs[j], &v.coeffs[l]),
                    );
                }
            }
        }
        out
    }

    /// Collects a bilinear series from its values on basis pairs.
    pub(crate) fn from_basis_values(
        field: PrimeField,
        dim: usize,
        order: usize,
        value: impl Fn(usize, usize) -> VectorSeries,
    ) -> BilinearSeries {
        let values: Vec<Vec<VectorSeries>> = (0..dim)
            .map(|i| (0..dim).map(|j| value(i, j)).collect())
            .collect();
        let coeffs = (0..=order)
            .map(|k| Bilinear::from_fn(field, dim, |i, j| values[i][j].coeffs[k].clone()))
            .collect();
        BilinearSeries { coeffs }
    }

    /// `α_t ∘ μ_t`.
    pub fn post_compose(&self, a: &LinearSeries) -> BilinearSeries {
        let (d, n) = (self.dim(), self.order());
        BilinearSeries::from_basis_values(self.field(), d, n, |i, j| {
            a.apply(&self.apply(&VectorSeries::basis(d, n, i), &VectorSeries::basis(d, n, j)))
        })
    }

    /// `μ_t ∘ (φ_t ⊗ φ_t)`.
    pub fn pre_compose(&self, phi: &LinearSeries) -> BilinearSeries {
        let (d, n) = (self.dim(), self.order());
        BilinearSeries::from_basis_values(self.field(), d, n, |i, j| {
            self.apply(
                &phi.apply(&VectorSeries::basis(d, n, i)),
                &phi.apply(&VectorSeries::basis(d, n, j)),
            )
        })
    }
}
