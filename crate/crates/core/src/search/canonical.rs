//! Isomorphism classes of `(magma, self-map)` pairs under simultaneous
//! relabeling of elements.

use itertools::Itertools;
use serde::Serialize;

use crate::structure::{FiniteHomStructure, Table};

/// The least `(table, alpha)` pair over all relabelings of a structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CanonicalForm(FiniteHomStructure);

impl CanonicalForm {
    pub fn structure(&self) -> &FiniteHomStructure {
        &self.0
    }

    pub fn into_inner(self) -> FiniteHomStructure {
        self.0
    }
}

/// Applies the bijection `sigma`: `σ(x) ⋆' σ(y) = σ(x ⋆ y)` and
/// `α'(σ(x)) = σ(α(x))`.
pub fn relabel(h: &FiniteHomStructure, sigma: &[usize]) -> FiniteHomStructure {
    let n = h.size();
    debug_assert_eq!(sigma.len(), n);
    let mut cells = vec![0u8; n * n];
    let mut alpha = vec![0u8; n];
    for x in 0..n {
        alpha[sigma[x]] = sigma[h.alpha(x)] as u8;
        for y in 0..n {
            cells[sigma[x] * n + sigma[y]] = sigma[h.mul(x, y)] as u8;
        }
    }
    FiniteHomStructure::from_parts_unchecked(Table::from_flat_unchecked(n, cells), alpha)
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    (0..n).permutations(n).collect()
}

pub fn canonicalize(h: &FiniteHomStructure) -> CanonicalForm {
    canonicalize_under(h, &permutations(h.size()))
}

pub(crate) fn canonicalize_under(h: &FiniteHomStructure, perms: &[Vec<usize>]) -> CanonicalForm {
    let best = perms
        .iter()
        .map(|s| relabel(h, s))
        .min()
        .unwrap_or_else(|| h.clone());
    CanonicalForm(best)
}

/// Whether no relabeling in `perms` produces a smaller structure.
pub(crate) fn is_least_under(h: &FiniteHomStructure, perms: &[Vec<usize>]) -> bool {
    perms.iter().all(|s| relabel(h, s) >= *h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hs(rows: &[&[usize]], alpha: &[usize]) -> FiniteHomStructure {
        let rows: Vec<Vec<usize>> = rows.iter().map(|r| r.to_vec()).collect();
        FiniteHomStructure::from_rows(&rows, alpha).unwrap()
    }

    #[test]
    fn swap_leaves_z2_unchanged() {
        let z2 = hs(&[&[0, 1], &[1, 0]], &[0, 1]);
        let swapped = relabel(&z2, &[1, 0]);
        assert_eq!(swapped.table().rows(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(canonicalize(&swapped), canonicalize(&z2));
    }

    #[test]
    fn canonical_form_is_idempotent_and_least() {
        let h = hs(&[&[1, 1], &[0, 0]], &[1, 0]);
        let c = canonicalize(&h);
        assert!(c.structure() <= &h);
        assert_eq!(canonicalize(c.structure()), c);
        assert!(is_least_under(c.structure(), &permutations(2)));
    }

    #[test]
    fn relabel_composes() {
        let h = hs(&[&[0, 2, 1], &[2, 1, 0], &[1, 1, 2]], &[2, 0, 1]);
        let s = [1, 2, 0];
        let t = [2, 1, 0];
        let st: Vec<usize> = (0..3).map(|x| t[s[x]]).collect();
        assert_eq!(relabel(&relabel(&h, &s), &t), relabel(&h, &st));
    }
}
