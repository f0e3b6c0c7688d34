//! Exhaustive searches over small coefficient spaces.

use super::algebra::{compatibility_violation, LinearHomAlgebra};
use super::field::{Bilinear, Matrix, PrimeField};
use super::formal::{
    associativity_defect, formal_twist_defect, hom_assoc_defect, DeformationTriple,
};
use super::series::{BilinearSeries, LinearSeries};
use super::DeformError;
use crate::par::{self, Execution};

/// Upper bound on the number of candidates any sweep will visit.
pub const MAX_CANDIDATES: u128 = 1 << 22;

fn space(field: PrimeField, entries: usize) -> Result<u128, DeformError> {
    let size = (field.modulus() as u128)
        .checked_pow(entries as u32)
        .unwrap_or(u128::MAX);
    if size > MAX_CANDIDATES {
        return Err(DeformError::SearchTooLarge(size));
    }
    Ok(size)
}

fn digits(field: PrimeField, entries: usize, mut code: u128) -> Vec<u32> {
    let p = field.modulus() as u128;
    (0..entries)
        .map(|_| {
            let v = (code % p) as u32;
            code /= p;
            v
        })
        .collect()
}

fn matrix_at(field: PrimeField, dim: usize, code: u128) -> Matrix {
    Matrix::from_flat(field, dim, digits(field, dim * dim, code)).expect("digits are reduced")
}

fn bilinear_at(field: PrimeField, dim: usize, code: u128) -> Bilinear {
    Bilinear::from_flat(field, dim, digits(field, dim * dim * dim, code))
        .expect("digits are reduced")
}

/// Every linear map satisfying `α(α(x)·α(y·z)) = α(α(x·y)·α(z))` for an
/// associative `mul`.
pub fn compatible_twistings(mul: &Bilinear) -> Result<Vec<Matrix>, DeformError> {
    let (f, d) = (mul.field(), mul.dim());
    let codes: Vec<u128> = (0..space(f, d * d)?).collect();
    let found = par::map(Execution::default(), &codes, |&c| {
        let m = matrix_at(f, d, c);
        compatibility_violation(mul, &m).is_none().then_some(m)
    });
    Ok(found.into_iter().flatten().collect())
}

/// Every order-one hom-associative deformation `(μ_0 + tμ_1, α_0 + tα_1)` of
/// `base`, including the trivial one, in order of `(μ_1, α_1)` codes.
pub fn order_one_deformations(
    base: &LinearHomAlgebra,
) -> Result<Vec<DeformationTriple>, DeformError> {
    let (f, d) = (base.field(), base.dim());
    let mu_space = space(f, d * d * d)?;
    let alpha_space = space(f, d * d)?;
    if mu_space.saturating_mul(alpha_space) > MAX_CANDIDATES {
        return Err(DeformError::SearchTooLarge(
            mu_space.saturating_mul(alpha_space),
        ));
    }
    let trivial = DeformationTriple::trivial(base.clone(), 1);
    let codes: Vec<u128> = (0..mu_space).collect();
    let chunks = par::map(Execution::default(), &codes, |&mc| {
        let with_mu = trivial
            .clone()
            .with_mu_coeff(1, bilinear_at(f, d, mc))
            .expect("order one");
        (0..alpha_space)
            .filter_map(|ac| {
                let cand = with_mu
                    .clone()
                    .with_alpha_coeff(1, matrix_at(f, d, ac))
                    .expect("order one");
                hom_assoc_defect(&cand).is_zero().then_some(cand)
            })
            .collect::<Vec<_>>()
    });
    Ok(chunks.into_iter().flatten().collect())
}

/// Every `μ_1` making `mul + tμ_1` associative modulo `t²`.
pub fn associative_deformations_order_one(
    mul: &Bilinear,
) -> Result<Vec<BilinearSeries>, DeformError> {
    let (f, d) = (mul.field(), mul.dim());
    let codes: Vec<u128> = (0..space(f, d * d * d)?).collect();
    let found = par::map(Execution::default(), &codes, |&c| {
        let s = BilinearSeries::new(vec![mul.clone(), bilinear_at(f, d, c)]).expect("same shape");
        associativity_defect(&s).is_zero().then_some(s)
    });
    Ok(found.into_iter().flatten().collect())
}

/// Every `α_1` making `alpha0 + tα_1` a formal twisting of the order-one
/// associative series `star`.
pub fn formal_twistings_order_one(
    star: &BilinearSeries,
    alpha0: &Matrix,
) -> Result<Vec<LinearSeries>, DeformError> {
    if star.order() != 1 {
        return Err(DeformError::OrderMismatch(star.order(), 1));
    }
    let (f, d) = (star.field(), star.dim());
    let codes: Vec<u128> = (0..space(f, d * d)?).collect();
    let found = par::map(Execution::default(), &codes, |&c| {
        let a = LinearSeries::new(vec![alpha0.clone(), matrix_at(f, d, c)]).expect("same shape");
        match formal_twist_defect(&a, star) {
            Ok(defect) if defect.is_zero() => Some(Ok(a)),
            Ok(_) => None,
            Err(e) => Some(Err(e)),
        }
    });
    found.into_iter().flatten().collect()
}
