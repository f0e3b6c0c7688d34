//! Pointwise predicates and identity checks on finite hom-structures.

use serde::Serialize;

use crate::structure::{FiniteHomStructure, Section, Table};
use crate::HomError;

/// First `(x, y, z)` violating `α(x)⋆(y⋆z) = (x⋆y)⋆α(z)`, lexicographically.
pub fn hom_associativity_violation(h: &FiniteHomStructure) -> Option<(usize, usize, usize)> {
    let n = h.size();
    for x in 0..n {
        let ax = h.alpha(x);
        for y in 0..n {
            let xy = h.mul(x, y);
            for z in 0..n {
                if h.mul(ax, h.mul(y, z)) != h.mul(xy, h.alpha(z)) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

pub fn is_hom_associative(h: &FiniteHomStructure) -> bool {
    hom_associativity_violation(h).is_none()
}

/// Degeneracy witnesses. Each witness is the lexicographically least pair
/// `(a, b)` with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegeneracyReport {
    /// `x⋆a = x⋆b` for all `x`.
    pub left: Option<(usize, usize)>,
    /// `a⋆x = b⋆x` for all `x`.
    pub right: Option<(usize, usize)>,
    pub two_sided: bool,
    /// A single pair that works on both sides.
    pub strong: Option<(usize, usize)>,
}

impl DegeneracyReport {
    pub fn is_strongly_degenerate(&self) -> bool {
        self.strong.is_some()
    }
}

pub fn degeneracy_report(h: &FiniteHomStructure) -> DegeneracyReport {
    let n = h.size();
    let same_column = |a: usize, b: usize| (0..n).all(|x| h.mul(x, a) == h.mul(x, b));
    let same_row = |a: usize, b: usize| (0..n).all(|x| h.mul(a, x) == h.mul(b, x));
    let pairs = || (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)));

    let left = pairs().find(|&(a, b)| same_column(a, b));
    let right = pairs().find(|&(a, b)| same_row(a, b));
    let strong = pairs().find(|&(a, b)| same_column(a, b) && same_row(a, b));
    DegeneracyReport {
        left,
        right,
        two_sided: left.is_some() && right.is_some(),
        strong,
    }
}

/// Whether any pair is indistinguishable from both sides.
pub fn is_strongly_degenerate(h: &FiniteHomStructure) -> bool {
    let n = h.size();
    (0..n).any(|a| {
        (a + 1..n).any(|b| (0..n).all(|x| h.mul(x, a) == h.mul(x, b) && h.mul(a, x) == h.mul(b, x)))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaProperties {
    pub surjective: bool,
    pub injective: bool,
    pub bijective: bool,
}

pub fn alpha_properties(h: &FiniteHomStructure) -> AlphaProperties {
    let n = h.size();
    let mut hits = vec![0usize; n];
    for x in 0..n {
        hits[h.alpha(x)] += 1;
    }
    let surjective = hits.iter().all(|&c| c > 0);
    let injective = hits.iter().all(|&c| c <= 1);
    // On a finite carrier the two notions coincide.
    assert_eq!(
        surjective, injective,
        "finite self-map: onto iff one-to-one"
    );
    AlphaProperties {
        surjective,
        injective,
        bijective: surjective && injective,
    }
}

/// `a ⋆ᵒᵖ b := b ⋆ a` with the same twisting map.
pub fn opposite(h: &FiniteHomStructure) -> FiniteHomStructure {
    FiniteHomStructure::from_parts_unchecked(h.table().transpose(), h.alpha_raw().to_vec())
}

/// Outcome of checking one universally quantified identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub tuples: u64,
    /// First violating tuple in lexicographic order.
    pub violation: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.violation.is_none())
    }

    pub fn violations(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| c.violation.is_some())
    }

    pub(crate) fn push(&mut self, check: IdentityCheck) {
        self.checks.push(check);
    }
}

/// Checks `holds` on every tuple of `arity` elements of `0..n`.
pub(crate) fn check_all(
    name: &'static str,
    n: usize,
    arity: usize,
    mut holds: impl FnMut(&[usize]) -> bool,
) -> IdentityCheck {
    let mut tuple = vec![0usize; arity];
    let mut tuples = 0u64;
    loop {
        tuples += 1;
        if !holds(&tuple) {
            return IdentityCheck {
                name,
                tuples,
                violation: Some(tuple),
            };
        }
        // Odometer step, last coordinate fastest.
        let mut i = arity;
        loop {
            if i == 0 {
                return IdentityCheck {
                    name,
                    tuples,
                    violation: None,
                };
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
        }
    }
}

pub(crate) fn require_hom_section(h: &FiniteHomStructure, beta: &Section) -> Result<(), HomError> {
    if let Some((x, y, z)) = hom_associativity_violation(h) {
        return Err(HomError::NotHomAssociative(x, y, z));
    }
    Section::new(h, beta.as_slice().to_vec()).map(|_| ())
}

/// The four associativity conditions in context that hold for every
/// hom-associative structure with a section `β`. With
/// `L = x⋆β(y⋆z)` and `R = β(x⋆y)⋆z`, each of
/// `a⋆(b⋆□)`, `a⋆(□⋆b)`, `(□⋆b)⋆a` and `(b⋆□)⋆a` agrees on `L` and `R`.
///
/// Tuples are `(a, b, x, y, z)`.
pub fn check_context_associativity(
    h: &FiniteHomStructure,
    beta: &Section,
) -> Result<IdentityReport, HomError> {
    require_hom_section(h, beta)?;
    let n = h.size();
    let m = |x, y| h.mul(x, y);
    let b_ = |x| beta.apply(x);
    let sides = |t: &[usize]| {
        let (x, y, z) = (t[2], t[3], t[4]);
        (m(x, b_(m(y, z))), m(b_(m(x, y)), z))
    };
    let mut report = IdentityReport::default();
    report.push(check_all("a*(b*[])", n, 5, |t| {
        let (l, r) = sides(t);
        m(t[0], m(t[1], l)) == m(t[0], m(t[1], r))
    }));
    report.push(check_all("a*([]*b)", n, 5, |t| {
        let (l, r) = sides(t);
        m(t[0], m(l, t[1])) == m(t[0], m(r, t[1]))
    }));
    report.push(check_all("([]*b)*a", n, 5, |t| {
        let (l, r) = sides(t);
        m(m(l, t[1]), t[0]) == m(m(r, t[1]), t[0])
    }));
    report.push(check_all("(b*[])*a", n, 5, |t| {
        let (l, r) = sides(t);
        m(m(t[1], l), t[0]) == m(m(t[1], r), t[0])
    }));
    Ok(report)
}

/// Auxiliary identities used along the way:
///
/// * section shift: `(β(x)⋆y)⋆z = x⋆(y⋆β(z))`
/// * squared twist: `α²(x)⋆((y⋆z)⋆u) = α(x⋆y)⋆(α(z)⋆u)`
/// * section absorption: `x⋆(y⋆β(α(z))) = (β(x)⋆y)⋆α(z) = x⋆(y⋆z)`
pub fn check_helper_identities(
    h: &FiniteHomStructure,
    beta: &Section,
) -> Result<IdentityReport, HomError> {
    require_hom_section(h, beta)?;
    let n = h.size();
    let m = |x, y| h.mul(x, y);
    let a = |x| h.alpha(x);
    let b = |x| beta.apply(x);
    let mut report = IdentityReport::default();
    report.push(check_all("section-shift", n, 3, |t| {
        m(m(b(t[0]), t[1]), t[2]) == m(t[0], m(t[1], b(t[2])))
    }));
    report.push(check_all("squared-twist", n, 4, |t| {
        let (x, y, z, u) = (t[0], t[1], t[2], t[3]);
        m(a(a(x)), m(m(y, z), u)) == m(a(m(x, y)), m(a(z), u))
    }));
    report.push(check_all("section-absorption-inner", n, 3, |t| {
        let (x, y, z) = (t[0], t[1], t[2]);
        m(x, m(y, b(a(z)))) == m(m(b(x), y), a(z))
    }));
    report.push(check_all("section-absorption-outer", n, 3, |t| {
        let (x, y, z) = (t[0], t[1], t[2]);
        m(m(b(x), y), a(z)) == m(x, m(y, z))
    }));
    Ok(report)
}

/// `α(α(x)·α(y·z)) = α(α(x·y)·α(z))`, the relation any untwist must satisfy.
pub fn twisting_compatibility_violation(
    table: &Table,
    alpha: &[usize],
) -> Option<(usize, usize, usize)> {
    let n = table.size();
    let m = |x, y| table.mul(x, y);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = alpha[m(alpha[x], alpha[m(y, z)])];
                let rhs = alpha[m(alpha[m(x, y)], alpha[z])];
                if lhs != rhs {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hs(rows: &[&[usize]], alpha: &[usize]) -> FiniteHomStructure {
        let rows: Vec<Vec<usize>> = rows.iter().map(|r| r.to_vec()).collect();
        FiniteHomStructure::from_rows(&rows, alpha).unwrap()
    }

    const Z2: &[&[usize]] = &[&[0, 1], &[1, 0]];

    #[test]
    fn hom_associativity_examples() {
        assert!(is_hom_associative(&hs(Z2, &[0, 1])));
        assert!(is_hom_associative(&hs(&[&[0, 0], &[0, 0]], &[1, 0])));
        assert!(is_hom_associative(&hs(&[&[0, 0], &[0, 0]], &[1, 1])));
        assert!(is_hom_associative(&hs(Z2, &[1, 0])));
    }

    #[test]
    fn constant_alpha_is_not_automatically_hom_associative_on_sets() {
        // Left projection twisted by a constant map: α(x)⋆(y⋆z) = c, (x⋆y)⋆α(z) = x.
        let h = hs(&[&[0, 0], &[1, 1]], &[0, 0]);
        assert_eq!(hom_associativity_violation(&h), Some((1, 0, 0)));
    }

    #[test]
    fn degeneracy_examples() {
        let constant = degeneracy_report(&hs(&[&[0, 0], &[0, 0]], &[0, 1]));
        assert_eq!(constant.strong, Some((0, 1)));
        assert!(constant.two_sided);

        let z2 = degeneracy_report(&hs(Z2, &[0, 1]));
        assert_eq!(
            z2,
            DegeneracyReport {
                left: None,
                right: None,
                two_sided: false,
                strong: None
            }
        );

        let left_proj = degeneracy_report(&hs(&[&[0, 0], &[1, 1]], &[0, 1]));
        assert_eq!(left_proj.left, Some((0, 1)));
        assert_eq!(left_proj.right, None);
        assert_eq!(left_proj.strong, None);
        assert!(!left_proj.two_sided);
    }

    #[test]
    fn two_sided_without_strong() {
        // Columns 1,2 agree and rows 0,1 agree, but no single pair does both.
        let h = hs(&[&[0, 1, 1], &[0, 1, 1], &[2, 0, 0]], &[0, 1, 2]);
        let r = degeneracy_report(&h);
        assert_eq!(r.left, Some((1, 2)));
        assert_eq!(r.right, Some((0, 1)));
        assert!(r.two_sided);
        assert_eq!(r.strong, None);
    }

    #[test]
    fn alpha_property_examples() {
        let all = AlphaProperties {
            surjective: true,
            injective: true,
            bijective: true,
        };
        assert_eq!(alpha_properties(&hs(Z2, &[0, 1])), all);
        assert_eq!(alpha_properties(&hs(Z2, &[1, 0])), all);
        assert_eq!(
            alpha_properties(&hs(Z2, &[0, 0])),
            AlphaProperties {
                surjective: false,
                injective: false,
                bijective: false
            }
        );
    }

    #[test]
    fn opposite_transposes() {
        let h = hs(&[&[0, 0], &[1, 1]], &[1, 0]);
        let op = opposite(&h);
        assert_eq!(op.table().rows(), vec![vec![0, 1], vec![0, 1]]);
        assert_eq!(op.alpha_map(), vec![1, 0]);
        assert_eq!(opposite(&op), h);
        let sym = hs(Z2, &[0, 1]);
        assert_eq!(opposite(&sym), sym);
    }

    #[test]
    fn context_and_helper_identities_on_small_examples() {
        for (rows, alpha, beta) in [(Z2, [0, 1], [0, 1]), (Z2, [1, 0], [1, 0])] {
            let h = hs(rows, &alpha);
            let s = Section::new(&h, beta.to_vec()).unwrap();
            let ctx = check_context_associativity(&h, &s).unwrap();
            assert!(ctx.all_hold());
            assert_eq!(ctx.checks.len(), 4);
            assert!(ctx.checks.iter().all(|c| c.tuples == 32));
            let helper = check_helper_identities(&h, &s).unwrap();
            assert!(helper.all_hold());
            assert_eq!(helper.checks[1].tuples, 16);
        }
    }

    #[test]
    fn identity_checks_reject_preconditions() {
        let not_hom = hs(&[&[0, 0], &[1, 1]], &[0, 0]);
        let s = Section::new(&hs(Z2, &[0, 1]), vec![0, 1]).unwrap();
        assert_eq!(
            check_context_associativity(&not_hom, &s),
            Err(HomError::NotHomAssociative(1, 0, 0))
        );
        let h = hs(Z2, &[1, 0]);
        assert_eq!(
            check_helper_identities(&h, &s),
            Err(HomError::InvalidSection { x: 0 })
        );
    }

    #[test]
    fn check_all_reports_first_violation() {
        let c = check_all("t", 3, 2, |t| t != [1, 2]);
        assert_eq!(c.violation, Some(vec![1, 2]));
        assert_eq!(c.tuples, 6);
        let ok = check_all("t", 3, 3, |_| true);
        assert_eq!(ok.tuples, 27);
    }
}
