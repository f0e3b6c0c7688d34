//! Finite-dimensional hom-associative algebras and twistings of associative
//! algebras over `F_p`.

use super::field::{basis, kernel_vector, Bilinear, Matrix, PrimeField};
use super::{DeformError, MAX_DIM};

/// `(F_p^d, μ, α)` with `α(x)·(y·z) = (x·y)·α(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearHomAlgebra {
    mul: Bilinear,
    alpha: Matrix,
}

impl LinearHomAlgebra {
    pub fn new(mul: Bilinear, alpha: Matrix) -> Result<Self, DeformError> {
        check_pair(&mul, &alpha)?;
        if let Some((x, y, z)) = hom_associativity_violation(&mul, &alpha) {
            return Err(DeformError::NotHomAssociative(x, y, z));
        }
        Ok(Self { mul, alpha })
    }

    pub fn field(&self) -> PrimeField {
        self.mul.field()
    }

    pub fn dim(&self) -> usize {
        self.mul.dim()
    }

    pub fn mul(&self) -> &Bilinear {
        &self.mul
    }

    pub fn alpha(&self) -> &Matrix {
        &self.alpha
    }

    /// A nonzero `c` with `x⋆c = c⋆x = 0` for all `x`. Such a `c` exists iff
    /// some `a ≠ b` are indistinguishable from both sides (take `c = a − b`).
    pub fn strong_degeneracy_witness(&self) -> Option<Vec<u32>> {
        let d = self.dim();
        // Rows: coordinates of e_i⋆c and c⋆e_i as linear forms in c.
        let mut rows = Vec::with_capacity(2 * d * d * d);
        for i in 0..d {
            for k in 0..d {
                rows.extend((0..d).map(|j| self.mul.on_basis(i, j)[k]));
            }
            for k in 0..d {
                rows.extend((0..d).map(|j| self.mul.on_basis(j, i)[k]));
            }
        }
        kernel_vector(self.field(), d, rows)
    }

    pub fn is_strongly_degenerate(&self) -> bool {
        self.strong_degeneracy_witness().is_some()
    }

    /// `α⁻¹ ∘ μ`, the unique untwist when `α` is invertible.
    pub fn untwist(&self) -> Result<Bilinear, DeformError> {
        let inv = self.alpha.inverse().ok_or(DeformError::SingularMatrix)?;
        Ok(self.mul.post_compose(&inv))
    }
}

fn check_pair(mul: &Bilinear, alpha: &Matrix) -> Result<(), DeformError> {
    if mul.field() != alpha.field() || mul.dim() != alpha.dim() {
        return Err(DeformError::Shape(
            "multiplication and twisting map disagree in field or dimension",
        ));
    }
    if mul.dim() > MAX_DIM {
        return Err(DeformError::DimensionTooLarge(mul.dim()));
    }
    Ok(())
}

pub(crate) fn hom_associativity_violation(
    mul: &Bilinear,
    alpha: &Matrix,
) -> Option<(usize, usize, usize)> {
    let d = mul.dim();
    for x in 0..d {
        let ax = alpha.apply(&basis(d, x));
        for y in 0..d {
            let xy = mul.on_basis(x, y).to_vec();
            for z in 0..d {
                let lhs = mul.apply(&ax, mul.on_basis(y, z));
                let rhs = mul.apply(&xy, &alpha.apply(&basis(d, z)));
                if lhs != rhs {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// `α(α(x)·α(y·z)) = α(α(x·y)·α(z))` on basis triples.
pub(crate) fn compatibility_violation(
    mul: &Bilinear,
    alpha: &Matrix,
) -> Option<(usize, usize, usize)> {
    let d = mul.dim();
    let a = |v: &[u32]| alpha.apply(v);
    for x in 0..d {
        let ax = a(&basis(d, x));
        for y in 0..d {
            let axy = a(mul.on_basis(x, y));
            for z in 0..d {
                let lhs = a(&mul.apply(&ax, &a(mul.on_basis(y, z))));
                let rhs = a(&mul.apply(&axy, &a(&basis(d, z))));
                if lhs != rhs {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// An associative algebra `(F_p^d, ·)` with a linear map `α` satisfying the
/// compatibility relation, so that `x ⋆ y := α(x·y)` is hom-associative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociativeTwisting {
    mul: Bilinear,
    alpha: Matrix,
}

impl AssociativeTwisting {
    pub fn new(mul: Bilinear, alpha: Matrix) -> Result<Self, DeformError> {
        check_pair(&mul, &alpha)?;
        if let Some((x, y, z)) = mul.associativity_violation() {
            return Err(DeformError::NotAssociative(x, y, z));
        }
        if let Some((x, y, z)) = compatibility_violation(&mul, &alpha) {
            return Err(DeformError::IncompatibleTwisting(x, y, z));
        }
        Ok(Self { mul, alpha })
    }

    pub fn mul(&self) -> &Bilinear {
        &self.mul
    }

    pub fn alpha(&self) -> &Matrix {
        &self.alpha
    }

    /// The hom-associative algebra `(α∘·, α)`.
    pub fn twisted(&self) -> LinearHomAlgebra {
        LinearHomAlgebra::new(self.mul.post_compose(&self.alpha), self.alpha.clone())
            .expect("compatibility relation is hom-associativity of the twist")
    }
}

/// `x ·' y := φ(φ⁻¹(x) · φ⁻¹(y))`, the multiplication making `φ` an
/// isomorphism.
pub fn transport_multiplication(phi: &Matrix, mul: &Bilinear) -> Result<Bilinear, DeformError> {
    let inv = phi.inverse().ok_or(DeformError::SingularMatrix)?;
    Ok(mul.pre_compose(&inv).post_compose(phi))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugateTwist {
    /// `(·', α' = φ α φ⁻¹)`.
    pub twisting: AssociativeTwisting,
    /// `(α'∘·', α')`.
    pub hom_algebra: LinearHomAlgebra,
}

/// Transports a twisting along an algebra isomorphism `φ: (A, ·) → (A, ·')`.
///
/// Checks that `α' = φαφ⁻¹` is a twisting of `·'` and that
/// `φ(x ⋆ y) = φ(x) ⋆' φ(y)` for the induced hom-multiplications.
pub fn conjugate_twist(
    phi: &Matrix,
    source: &AssociativeTwisting,
    mul_prime: &Bilinear,
) -> Result<ConjugateTwist, DeformError> {
    let d = source.mul.dim();
    if phi.dim() != d || mul_prime.dim() != d || phi.field() != source.mul.field() {
        return Err(DeformError::Shape(
            "phi, source and target disagree in field or dimension",
        ));
    }
    let phi_inv = phi.inverse().ok_or(DeformError::SingularMatrix)?;
    for x in 0..d {
        for y in 0..d {
            let lhs = phi.apply(source.mul.on_basis(x, y));
            let rhs = mul_prime.apply(&phi.apply(&basis(d, x)), &phi.apply(&basis(d, y)));
            if lhs != rhs {
                return Err(DeformError::NotIsomorphism(x, y));
            }
        }
    }
    let alpha_prime = phi.compose(&source.alpha).compose(&phi_inv);
    let twisting = AssociativeTwisting::new(mul_prime.clone(), alpha_prime)?;
    let star = source.twisted();
    let star_prime = twisting.twisted();
    for x in 0..d {
        for y in 0..d {
            let lhs = phi.apply(star.mul().on_basis(x, y));
            let rhs = star_prime
                .mul()
                .apply(&phi.apply(&basis(d, x)), &phi.apply(&basis(d, y)));
            if lhs != rhs {
                return Err(DeformError::HomIsomorphismFails(x, y));
            }
        }
    }
    Ok(ConjugateTwist {
        twisting,
        hom_algebra: star_prime,
    })
}

/// Small reference algebras used by tests, benches and the CLI fixtures.
pub mod examples {
    use super::*;

    /// `F_p^dim` with coordinatewise product, basis the primitive idempotents.
    pub fn coordinatewise(field: PrimeField, dim: usize) -> Bilinear {
        Bilinear::from_fn(field, dim, |i, j| {
            if i == j {
                basis(dim, i)
            } else {
                vec![0; dim]
            }
        })
    }

    /// Group algebra `F_p[Z/2]`, basis `1, g`.
    pub fn group_algebra_z2(field: PrimeField) -> Bilinear {
        Bilinear::from_fn(field, 2, |i, j| basis(2, (i + j) % 2))
    }

    /// Upper-triangular 2×2 matrices, basis `E11, E12, E22`.
    pub fn upper_triangular(field: PrimeField) -> Bilinear {
        Bilinear::from_fn(field, 3, |i, j| match (i, j) {
            (0, 0) => basis(3, 0),
            (0, 1) => basis(3, 1),
            (1, 2) => basis(3, 1),
            (2, 2) => basis(3, 2),
            _ => vec![0; 3],
        })
    }

    /// Permutation matrix sending `e_j` to `e_{perm[j]}`.
    pub fn permutation(field: PrimeField, perm: &[usize]) -> Matrix {
        let d = perm.len();
        let mut m = Matrix::zero(field, d);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, 1);
        }
        m
    }

    /// Named base algebras of dimension at most 3 over `F_2` and `F_3`, each
    /// the twist of an associative algebra by an automorphism.
    pub fn base_fixtures() -> Vec<(String, LinearHomAlgebra)> {
        let mut out = Vec::new();
        for p in [2, 3] {
            let f = PrimeField::new(p).expect("small prime");
            let cases = [
                (
                    "coordinatewise-2-swap",
                    coordinatewise(f, 2),
                    permutation(f, &[1, 0]),
                ),
                (
                    "coordinatewise-2-identity",
                    coordinatewise(f, 2),
                    Matrix::identity(f, 2),
                ),
                (
                    "coordinatewise-3-cycle",
                    coordinatewise(f, 3),
                    permutation(f, &[1, 2, 0]),
                ),
                (
                    "group-z2-identity",
                    group_algebra_z2(f),
                    Matrix::identity(f, 2),
                ),
                (
                    "upper-triangular-identity",
                    upper_triangular(f),
                    Matrix::identity(f, 3),
                ),
            ];
            for (name, mul, alpha) in cases {
                let tw = AssociativeTwisting::new(mul, alpha).expect("automorphism twisting");
                out.push((format!("{name}-p{p}"), tw.twisted()));
            }
        }
        out
    }
}
