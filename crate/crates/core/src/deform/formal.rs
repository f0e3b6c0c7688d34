//! Formal deformations `(A[[t]], μ_t, α_t)` truncated at order `N`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::algebra::LinearHomAlgebra;
use super::field::{Matrix, PrimeField};
use super::series::{BilinearSeries, LinearSeries, VectorSeries};
use super::DeformError;

/// Order-by-order coefficients of `lhs − rhs` of an identity, evaluated on
/// every basis tuple.
///
/// `orders[k]` is laid out as `[tuple index][output coordinate]` with tuples
/// in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectSeries {
    pub dim: usize,
    pub arity: usize,
    pub orders: Vec<Vec<u32>>,
}

impl DefectSeries {
    pub(crate) fn evaluate(
        field: PrimeField,
        dim: usize,
        order: usize,
        arity: usize,
        sides: impl Fn(&[usize]) -> (VectorSeries, VectorSeries),
    ) -> Self {
        let tuples = dim.pow(arity as u32);
        let mut orders = vec![Vec::with_capacity(tuples * dim); order + 1];
        let mut tuple = vec![0usize; arity];
        for code in 0..tuples {
            let mut c = code;
            for slot in tuple.iter_mut().rev() {
                *slot = c % dim;
                c /= dim;
            }
            let (lhs, rhs) = sides(&tuple);
            let diff = lhs.sub(&rhs, field);
            for (k, coeff) in diff.coeffs.into_iter().enumerate() {
                orders[k].extend(coeff);
            }
        }
        Self { dim, arity, orders }
    }

    pub fn order(&self) -> usize {
        self.orders.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.first_nonzero_order().is_none()
    }

    pub fn is_zero_at(&self, k: usize) -> bool {
        self.orders[k].iter().all(|&v| v == 0)
    }

    pub fn first_nonzero_order(&self) -> Option<usize> {
        (0..self.orders.len()).find(|&k| !self.is_zero_at(k))
    }

    /// The defect vector at order `k` on a basis tuple.
    pub fn at(&self, k: usize, tuple: &[usize]) -> &[u32] {
        let idx = tuple.iter().fold(0, |acc, &i| acc * self.dim + i);
        &self.orders[k][idx * self.dim..(idx + 1) * self.dim]
    }
}

/// A hom-associative algebra together with truncated series `μ_t`, `α_t`
/// whose degree-zero terms are the base multiplication and twisting map.
/// The series are not required to satisfy hom-associativity; see
/// [`hom_assoc_defect`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationTriple {
    base: LinearHomAlgebra,
    mu: BilinearSeries,
    alpha: LinearSeries,
}

impl DeformationTriple {
    pub fn new(
        base: LinearHomAlgebra,
        mu: BilinearSeries,
        alpha: LinearSeries,
    ) -> Result<Self, DeformError> {
        if mu.order() != alpha.order() {
            return Err(DeformError::OrderMismatch(mu.order(), alpha.order()));
        }
        if mu.field() != base.field()
            || mu.dim() != base.dim()
            || alpha.dim() != base.dim()
            || alpha.field() != base.field()
        {
            return Err(DeformError::Shape(
                "series disagree with the base in field or dimension",
            ));
        }
        if mu.coeff(0) != base.mul() {
            return Err(DeformError::BaseMismatch(
                "mu_0 must equal the base multiplication",
            ));
        }
        if alpha.coeff(0) != base.alpha() {
            return Err(DeformError::BaseMismatch(
                "alpha_0 must equal the base twisting map",
            ));
        }
        Ok(Self { base, mu, alpha })
    }

    /// `μ_i = 0`, `α_i = 0` for `i ≥ 1`.
    pub fn trivial(base: LinearHomAlgebra, order: usize) -> Self {
        let mu = BilinearSeries::constant(base.mul().clone(), order);
        let alpha = LinearSeries::constant(base.alpha().clone(), order);
        Self { base, mu, alpha }
    }

    pub fn base(&self) -> &LinearHomAlgebra {
        &self.base
    }

    pub fn mu(&self) -> &BilinearSeries {
        &self.mu
    }

    pub fn alpha(&self) -> &LinearSeries {
        &self.alpha
    }

    pub fn order(&self) -> usize {
        self.mu.order()
    }

    pub fn field(&self) -> PrimeField {
        self.base.field()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// Replaces a higher-order coefficient. Degree zero is pinned to the base.
    pub fn with_mu_coeff(
        mut self,
        k: usize,
        b: super::field::Bilinear,
    ) -> Result<Self, DeformError> {
        if k == 0 {
            return Err(DeformError::BaseMismatch("mu_0 is fixed by the base"));
        }
        *self.mu.coeff_mut(k) = b;
        Ok(self)
    }

    pub fn with_alpha_coeff(mut self, k: usize, m: Matrix) -> Result<Self, DeformError> {
        if k == 0 {
            return Err(DeformError::BaseMismatch("alpha_0 is fixed by the base"));
        }
        *self.alpha.coeff_mut(k) = m;
        Ok(self)
    }
}

/// `φ_t = Σ tⁱ φ_i` with `φ_0 = id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalIsomorphism {
    phi: LinearSeries,
}

impl FormalIsomorphism {
    pub fn new(phi: LinearSeries) -> Result<Self, DeformError> {
        if phi.coeff(0) != &Matrix::identity(phi.field(), phi.dim()) {
            return Err(DeformError::LeadingNotIdentity);
        }
        Ok(Self { phi })
    }

    pub fn identity(field: PrimeField, dim: usize, order: usize) -> Self {
        Self {
            phi: LinearSeries::identity(field, dim, order),
        }
    }

    pub fn series(&self) -> &LinearSeries {
        &self.phi
    }

    pub fn inverse(&self) -> LinearSeries {
        self.phi
            .invert()
            .expect("identity leading term is invertible")
    }
}

fn basis_series(d: usize, n: usize, i: usize) -> VectorSeries {
    VectorSeries::basis(d, n, i)
}

/// Order-`k` coefficient of `α_t(x)·_t(y·_t z) − (x·_t y)·_t α_t(z)` on basis
/// triples. The triple is a formal deformation up to order `N` iff every
/// coefficient vanishes.
pub fn hom_assoc_defect(d: &DeformationTriple) -> DefectSeries {
    let (f, dim, n) = (d.field(), d.dim(), d.order());
    let (mu, alpha) = (&d.mu, &d.alpha);
    DefectSeries::evaluate(f, dim, n, 3, |t| {
        let (x, y, z) = (
            basis_series(dim, n, t[0]),
            basis_series(dim, n, t[1]),
            basis_series(dim, n, t[2]),
        );
        let lhs = mu.apply(&alpha.apply(&x), &mu.apply(&y, &z));
        let rhs = mu.apply(&mu.apply(&x, &y), &alpha.apply(&z));
        (lhs, rhs)
    })
}

/// Order-by-order coefficients of `(x·_t y)·_t z − x·_t(y·_t z)`.
pub fn associativity_defect(mu: &BilinearSeries) -> DefectSeries {
    let (f, dim, n) = (mu.field(), mu.dim(), mu.order());
    DefectSeries::evaluate(f, dim, n, 3, |t| {
        let (x, y, z) = (
            basis_series(dim, n, t[0]),
            basis_series(dim, n, t[1]),
            basis_series(dim, n, t[2]),
        );
        (
            mu.apply(&mu.apply(&x, &y), &z),
            mu.apply(&x, &mu.apply(&y, &z)),
        )
    })
}

/// The untwisted product `ν_t = α_t⁻¹ ∘ μ_t` of a deformation of a
/// nondegenerate base with invertible twisting map.
///
/// Its degree-zero term is `α⁻¹ ∘ μ` and it is associative up to order `N`;
/// the latter is checked and reported as an error if it fails.
pub fn untwist_deformation(d: &DeformationTriple) -> Result<BilinearSeries, DeformError> {
    if let Some(k) = hom_assoc_defect(d).first_nonzero_order() {
        return Err(DeformError::NotDeformation(k));
    }
    if let Some(w) = d.base.strong_degeneracy_witness() {
        return Err(DeformError::StronglyDegenerate(w));
    }
    let inv = d.alpha.invert()?;
    let nu = d.mu.post_compose(&inv);
    if let Some(k) = associativity_defect(&nu).first_nonzero_order() {
        return Err(DeformError::UntwistNotAssociative(k));
    }
    Ok(nu)
}

/// Order-by-order coefficients of
/// `α_t(α_t(x) ⋆_t α_t(y ⋆_t z)) − α_t(α_t(x ⋆_t y) ⋆_t α_t(z))` on basis
/// triples, for an associative `⋆_t`.
pub fn formal_twist_defect(
    alpha: &LinearSeries,
    star: &BilinearSeries,
) -> Result<DefectSeries, DeformError> {
    if alpha.order() != star.order() {
        return Err(DeformError::OrderMismatch(alpha.order(), star.order()));
    }
    if alpha.dim() != star.dim() || alpha.field() != star.field() {
        return Err(DeformError::Shape("series disagree in field or dimension"));
    }
    if let Some(k) = associativity_defect(star).first_nonzero_order() {
        return Err(DeformError::NotAssociativeSeries(k));
    }
    let (f, dim, n) = (star.field(), star.dim(), star.order());
    Ok(DefectSeries::evaluate(f, dim, n, 3, |t| {
        let (x, y, z) = (
            basis_series(dim, n, t[0]),
            basis_series(dim, n, t[1]),
            basis_series(dim, n, t[2]),
        );
        let a = |v: &VectorSeries| alpha.apply(v);
        let lhs = a(&star.apply(&a(&x), &a(&star.apply(&y, &z))));
        let rhs = a(&star.apply(&a(&star.apply(&x, &y)), &a(&z)));
        (lhs, rhs)
    }))
}

/// `μ_t := α_t ∘ ⋆_t` for a formal twisting `α_t` of an associative `⋆_t`.
/// The base is `(α_0 ∘ ⋆_0, α_0)`.
pub fn twist_deformation(
    alpha: &LinearSeries,
    star: &BilinearSeries,
) -> Result<DeformationTriple, DeformError> {
    if let Some(k) = formal_twist_defect(alpha, star)?.first_nonzero_order() {
        return Err(DeformError::NotFormalTwisting(k));
    }
    let mu = star.post_compose(alpha);
    let base = LinearHomAlgebra::new(mu.coeff(0).clone(), alpha.coeff(0).clone())?;
    let d = DeformationTriple::new(base, mu, alpha.clone())?;
    debug_assert!(hom_assoc_defect(&d).is_zero());
    Ok(d)
}

/// Whether `φ_t ∘ μ_t = μ'_t ∘ (φ_t ⊗ φ_t)` and `φ_t ∘ α_t = α'_t ∘ φ_t`
/// up to order `N`.
pub fn equivalence_check(
    phi: &FormalIsomorphism,
    d: &DeformationTriple,
    d_prime: &DeformationTriple,
) -> Result<bool, DeformError> {
    if d.order() != d_prime.order() {
        return Err(DeformError::OrderMismatch(d.order(), d_prime.order()));
    }
    if phi.series().order() != d.order() {
        return Err(DeformError::OrderMismatch(phi.series().order(), d.order()));
    }
    if d.base != d_prime.base {
        return Err(DeformError::BaseMismatch(
            "deformations have different bases",
        ));
    }
    if phi.series().dim() != d.dim() || phi.series().field() != d.field() {
        return Err(DeformError::Shape(
            "phi disagrees with the deformations in field or dimension",
        ));
    }
    let p = phi.series();
    let mul_ok = d.mu.post_compose(p) == d_prime.mu.pre_compose(p);
    let alpha_ok = p.compose(&d.alpha) == d_prime.alpha.compose(p);
    Ok(mul_ok && alpha_ok)
}

/// The deformation `(φ_t ∘ μ_t ∘ (φ_t⁻¹ ⊗ φ_t⁻¹), φ_t ∘ α_t ∘ φ_t⁻¹)`,
/// equivalent to `d` via `φ_t`.
pub fn transport_deformation(
    phi: &FormalIsomorphism,
    d: &DeformationTriple,
) -> Result<DeformationTriple, DeformError> {
    if phi.series().order() != d.order() {
        return Err(DeformError::OrderMismatch(phi.series().order(), d.order()));
    }
    let inv = phi.inverse();
    let mu = d.mu.pre_compose(&inv).post_compose(phi.series());
    let alpha = phi.series().compose(&d.alpha).compose(&inv);
    DeformationTriple::new(d.base.clone(), mu, alpha)
}

/// Result of moving a formal twisting along a formal isomorphism of
/// associative deformations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalConjugation {
    pub star_prime: BilinearSeries,
    pub alpha_prime: LinearSeries,
    /// `α'_0 = α_0`.
    pub degree_zero_preserved: bool,
    /// `α'_t` is a formal twisting of `⋆'_t`.
    pub twisting_defect: DefectSeries,
    /// `φ_t(α_t(x ⋆_t y)) = α'_t(φ_t(x) ⋆'_t φ_t(y))` on basis pairs.
    pub hom_isomorphism_defect: DefectSeries,
}

impl FormalConjugation {
    pub fn holds(&self) -> bool {
        self.degree_zero_preserved
            && self.twisting_defect.is_zero()
            && self.hom_isomorphism_defect.is_zero()
    }
}

/// Transports `(⋆_t, α_t)` along `φ_t` to `(⋆'_t, φ_t α_t φ_t⁻¹)` where
/// `⋆'_t = φ_t ∘ ⋆_t ∘ (φ_t⁻¹ ⊗ φ_t⁻¹)`, and evaluates the resulting
/// identities.
pub fn transport_formal_twisting(
    phi: &FormalIsomorphism,
    alpha: &LinearSeries,
    star: &BilinearSeries,
) -> Result<FormalConjugation, DeformError> {
    if phi.series().order() != star.order() || alpha.order() != star.order() {
        return Err(DeformError::OrderMismatch(
            phi.series().order(),
            star.order(),
        ));
    }
    let p = phi.series();
    let inv = phi.inverse();
    let star_prime = star.pre_compose(&inv).post_compose(p);
    let alpha_prime = p.compose(alpha).compose(&inv);
    let twisting_defect = formal_twist_defect(&alpha_prime, &star_prime)?;
    let (f, dim, n) = (star.field(), star.dim(), star.order());
    let hom_isomorphism_defect = DefectSeries::evaluate(f, dim, n, 2, |t| {
        let (x, y) = (basis_series(dim, n, t[0]), basis_series(dim, n, t[1]));
        let lhs = p.apply(&alpha.apply(&star.apply(&x, &y)));
        let rhs = alpha_prime.apply(&star_prime.apply(&p.apply(&x), &p.apply(&y)));
        (lhs, rhs)
    });
    Ok(FormalConjugation {
        degree_zero_preserved: alpha_prime.coeff(0) == alpha.coeff(0),
        star_prime,
        alpha_prime,
        twisting_defect,
        hom_isomorphism_defect,
    })
}

/// Outcome of checking that nonzero truncated elements are not annihilated
/// from both sides by the deformed product.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NondegeneracyReport {
    pub exhaustive: bool,
    pub elements_checked: u64,
    pub witnessed: u64,
    /// Elements for which the leading term of the product with the witness
    /// was not `b ⋆ a_n` in degree `n`.
    pub leading_term_failures: u64,
    /// First element (coefficient vectors) without a witness.
    pub first_failure: Option<Vec<Vec<u32>>>,
}

impl NondegeneracyReport {
    pub fn passed(&self) -> bool {
        self.witnessed == self.elements_checked && self.leading_term_failures == 0
    }
}

/// Exhaustive space size below which every element is checked.
const EXHAUSTIVE_LIMIT: u128 = 1 << 20;

/// For each nonzero `a = Σ tⁱ a_i` with lowest nonzero coefficient `a_n`,
/// finds a basis vector `b` with `b ⋆ a_n ≠ 0` (or `a_n ⋆ b ≠ 0`) and checks
/// that `b ⋆_t a = tⁿ (b ⋆ a_n) + O(tⁿ⁺¹)` is nonzero.
///
/// Every element is checked when `d ≤ 2`, `p ≤ 3` and the space is small;
/// otherwise `trials` random elements drawn from `seed`.
pub fn nondegeneracy_preserved_check(
    d: &DeformationTriple,
    trials: u64,
    seed: u64,
) -> Result<NondegeneracyReport, DeformError> {
    if let Some(w) = d.base.strong_degeneracy_witness() {
        return Err(DeformError::StronglyDegenerate(w));
    }
    let (f, dim, n) = (d.field(), d.dim(), d.order());
    let p = f.modulus();
    let coords = dim * (n + 1);
    let space = (p as u128).checked_pow(coords as u32).unwrap_or(u128::MAX);
    let exhaustive = dim <= 2 && p <= 3 && space <= EXHAUSTIVE_LIMIT;
    let mut report = NondegeneracyReport {
        exhaustive,
        ..Default::default()
    };
    let to_series = |flat: &[u32]| VectorSeries {
        coeffs: flat.chunks(dim).map(<[u32]>::to_vec).collect(),
    };
    if exhaustive {
        for code in 1..space {
            let mut c = code;
            let flat: Vec<u32> = (0..coords)
                .map(|_| {
                    let v = (c % p as u128) as u32;
                    c /= p as u128;
                    v
                })
                .collect();
            check_element(d, &to_series(&flat), &mut report);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let a = random_nonzero_element(f, dim, n, &mut rng);
            check_element(d, &a, &mut report);
        }
    }
    Ok(report)
}

fn random_nonzero_element(f: PrimeField, dim: usize, n: usize, rng: &mut impl Rng) -> VectorSeries {
    let lowest = rng.random_range(0..=n);
    let mut a = VectorSeries::zero(dim, n);
    loop {
        a.coeffs[lowest] = (0..dim).map(|_| f.random(rng)).collect();
        if a.coeffs[lowest].iter().any(|&v| v != 0) {
            break;
        }
    }
    for k in lowest + 1..=n {
        a.coeffs[k] = (0..dim).map(|_| f.random(rng)).collect();
    }
    a
}

fn check_element(d: &DeformationTriple, a: &VectorSeries, report: &mut NondegeneracyReport) {
    report.elements_checked += 1;
    let (dim, n) = (d.dim(), d.order());
    let (lowest, lead) = a.leading().expect("element is nonzero");
    let mu0 = d.base.mul();
    let mut witness = None;
    for i in 0..dim {
        let b = super::field::basis(dim, i);
        let left = mu0.apply(&b, lead);
        if left.iter().any(|&v| v != 0) {
            witness = Some((i, true, left));
            break;
        }
        let right = mu0.apply(lead, &b);
        if right.iter().any(|&v| v != 0) {
            witness = Some((i, false, right));
            break;
        }
    }
    let Some((i, left_side, expected_lead)) = witness else {
        if report.first_failure.is_none() {
            report.first_failure = Some(a.coeffs.clone());
        }
        return;
    };
    let b = VectorSeries::basis(dim, n, i);
    let product = if left_side {
        d.mu.apply(&b, a)
    } else {
        d.mu.apply(a, &b)
    };
    if product.is_zero() {
        if report.first_failure.is_none() {
            report.first_failure = Some(a.coeffs.clone());
        }
        return;
    }
    report.witnessed += 1;
    let below_zero = product.coeffs[..lowest].iter().flatten().all(|&v| v == 0);
    if !below_zero || product.coeffs[lowest] != expected_lead {
        report.leading_term_failures += 1;
    }
}
