//! Plain serializable forms of deformation inputs.
//!
//! Tensors are nested as `mu[k][i][j][l]`: the `e_l` coefficient of
//! `μ_k(e_i, e_j)`. Matrices are row-major: `alpha[k][i][j]` is the entry in
//! row `i`, column `j` of `α_k`.

use serde::{Deserialize, Serialize};

use super::algebra::{AssociativeTwisting, LinearHomAlgebra};
use super::field::{Bilinear, Matrix, PrimeField};
use super::formal::{DeformationTriple, FormalIsomorphism};
use super::series::{BilinearSeries, LinearSeries};
use super::{DeformError, MAX_DIM};

pub type TensorRows = Vec<Vec<Vec<u32>>>;
pub type MatrixRows = Vec<Vec<u32>>;

fn check_header(p: u32, dim: usize, order: usize, len: usize) -> Result<PrimeField, DeformError> {
    let field = PrimeField::new(p)?;
    if dim == 0 {
        return Err(DeformError::Shape("dimension must be positive"));
    }
    if dim > MAX_DIM {
        return Err(DeformError::DimensionTooLarge(dim));
    }
    if len != order + 1 {
        return Err(DeformError::Shape("series length must be order + 1"));
    }
    Ok(field)
}

fn matrix(field: PrimeField, dim: usize, rows: &MatrixRows) -> Result<Matrix, DeformError> {
    let m = Matrix::from_rows(field, rows)?;
    if m.dim() != dim {
        return Err(DeformError::Shape("matrix dimension disagrees with dim"));
    }
    Ok(m)
}

fn tensor(field: PrimeField, dim: usize, t: &TensorRows) -> Result<Bilinear, DeformError> {
    let b = Bilinear::from_nested(field, t)?;
    if b.dim() != dim {
        return Err(DeformError::Shape("tensor dimension disagrees with dim"));
    }
    Ok(b)
}

fn linear_series(
    field: PrimeField,
    dim: usize,
    ms: &[MatrixRows],
) -> Result<LinearSeries, DeformError> {
    LinearSeries::new(
        ms.iter()
            .map(|m| matrix(field, dim, m))
            .collect::<Result<_, _>>()?,
    )
}

fn bilinear_series(
    field: PrimeField,
    dim: usize,
    ts: &[TensorRows],
) -> Result<BilinearSeries, DeformError> {
    BilinearSeries::new(
        ts.iter()
            .map(|t| tensor(field, dim, t))
            .collect::<Result<_, _>>()?,
    )
}

/// A truncated deformation `(μ_t, α_t)`; the base is `(μ_0, α_0)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationFile {
    pub p: u32,
    pub dim: usize,
    pub order: usize,
    pub mu: Vec<TensorRows>,
    pub alpha: Vec<MatrixRows>,
}

impl DeformationFile {
    pub fn to_triple(&self) -> Result<DeformationTriple, DeformError> {
        let field = check_header(self.p, self.dim, self.order, self.mu.len())?;
        check_header(self.p, self.dim, self.order, self.alpha.len())?;
        let mu = bilinear_series(field, self.dim, &self.mu)?;
        let alpha = linear_series(field, self.dim, &self.alpha)?;
        let base = LinearHomAlgebra::new(mu.coeff(0).clone(), alpha.coeff(0).clone())?;
        DeformationTriple::new(base, mu, alpha)
    }

    pub fn from_triple(d: &DeformationTriple) -> Self {
        Self {
            p: d.field().modulus(),
            dim: d.dim(),
            order: d.order(),
            mu: d.mu().coeffs().iter().map(Bilinear::nested).collect(),
            alpha: d.alpha().coeffs().iter().map(Matrix::rows).collect(),
        }
    }
}

/// A truncated linear series, e.g. `α_t` to be inverted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearSeriesFile {
    pub p: u32,
    pub dim: usize,
    pub order: usize,
    pub series: Vec<MatrixRows>,
}

impl LinearSeriesFile {
    pub fn to_series(&self) -> Result<LinearSeries, DeformError> {
        let field = check_header(self.p, self.dim, self.order, self.series.len())?;
        linear_series(field, self.dim, &self.series)
    }

    pub fn from_series(s: &LinearSeries) -> Self {
        Self {
            p: s.field().modulus(),
            dim: s.dim(),
            order: s.order(),
            series: s.coeffs().iter().map(Matrix::rows).collect(),
        }
    }
}

/// A formal isomorphism `φ_t` with `φ_0 = id`. Field and dimension come
/// from the deformations it is used with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormalIsomorphismFile {
    pub order: usize,
    pub phi: Vec<MatrixRows>,
}

impl FormalIsomorphismFile {
    pub fn to_isomorphism(
        &self,
        field: PrimeField,
        dim: usize,
    ) -> Result<FormalIsomorphism, DeformError> {
        check_header(field.modulus(), dim, self.order, self.phi.len())?;
        FormalIsomorphism::new(linear_series(field, dim, &self.phi)?)
    }

    pub fn from_isomorphism(phi: &FormalIsomorphism) -> Self {
        Self {
            order: phi.series().order(),
            phi: phi.series().coeffs().iter().map(Matrix::rows).collect(),
        }
    }
}

/// An associative series `⋆_t` with a candidate formal twisting `α_t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistingFile {
    pub p: u32,
    pub dim: usize,
    pub order: usize,
    pub star: Vec<TensorRows>,
    pub alpha: Vec<MatrixRows>,
}

impl TwistingFile {
    pub fn to_series(&self) -> Result<(LinearSeries, BilinearSeries), DeformError> {
        let field = check_header(self.p, self.dim, self.order, self.star.len())?;
        check_header(self.p, self.dim, self.order, self.alpha.len())?;
        Ok((
            linear_series(field, self.dim, &self.alpha)?,
            bilinear_series(field, self.dim, &self.star)?,
        ))
    }
}

/// An associative twisting `(·, α)` together with an isomorphism `φ` onto
/// `·'`. When `mul_prime` is absent it is taken to be `φ·(φ⁻¹ ⊗ φ⁻¹)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjugationFile {
    pub p: u32,
    pub dim: usize,
    pub mul: TensorRows,
    pub alpha: MatrixRows,
    pub phi: MatrixRows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mul_prime: Option<TensorRows>,
}

impl ConjugationFile {
    pub fn to_parts(&self) -> Result<(Matrix, AssociativeTwisting, Option<Bilinear>), DeformError> {
        let field = check_header(self.p, self.dim, 0, 1)?;
        let source = AssociativeTwisting::new(
            tensor(field, self.dim, &self.mul)?,
            matrix(field, self.dim, &self.alpha)?,
        )?;
        let phi = matrix(field, self.dim, &self.phi)?;
        let mul_prime = self
            .mul_prime
            .as_ref()
            .map(|t| tensor(field, self.dim, t))
            .transpose()?;
        Ok((phi, source, mul_prime))
    }
}
