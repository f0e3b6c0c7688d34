//! Twists `x ⋆ y = α(x · y)` of associative magmas and the search for untwists.

use serde::Serialize;

use crate::identities::{hom_associativity_violation, twisting_compatibility_violation};
use crate::structure::{FiniteHomStructure, Section, Table};
use crate::HomError;

/// Largest carrier accepted by [`is_twist`]; the fiber search is
/// worst-case `n^(n²)`.
pub const MAX_TWIST_SEARCH_SIZE: usize = 6;

/// Builds the twist of an associative `table` by `alpha`.
///
/// Both associativity and the compatibility relation
/// `α(α(x)·α(y·z)) = α(α(x·y)·α(z))` are required; together they are
/// equivalent to hom-associativity of the result.
pub fn twist(table: &Table, alpha: &[usize]) -> Result<FiniteHomStructure, HomError> {
    let n = table.size();
    if alpha.len() != n {
        return Err(HomError::SizeMismatch {
            expected: n,
            found: alpha.len(),
        });
    }
    if let Some(x) = alpha.iter().position(|&a| a >= n) {
        return Err(HomError::AlphaOutOfRange { x, size: n });
    }
    if let Some((x, y, z)) = table.associativity_violation() {
        return Err(HomError::NotAssociative(x, y, z));
    }
    if let Some((x, y, z)) = twisting_compatibility_violation(table, alpha) {
        return Err(HomError::IncompatibleTwisting(x, y, z));
    }
    let twisted = table.map_entries(|v| alpha[v]);
    let h =
        FiniteHomStructure::from_parts_unchecked(twisted, alpha.iter().map(|&a| a as u8).collect());
    debug_assert!(hom_associativity_violation(&h).is_none());
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UntwistResult {
    pub beta: Section,
    /// Entry `(x, y)` is `β(x ⋆ y)`.
    pub induced_table: Table,
    pub associative: bool,
}

/// The candidate untwist `x · y := β(x ⋆ y)`.
pub fn untwist_via_section(
    h: &FiniteHomStructure,
    beta: &Section,
) -> Result<UntwistResult, HomError> {
    let beta = Section::new(h, beta.as_slice().to_vec())?;
    let induced = h.table().map_entries(|v| beta.apply(v));
    debug_assert_eq!(&induced.map_entries(|v| h.alpha(v)), h.table());
    Ok(UntwistResult {
        associative: induced.is_associative(),
        induced_table: induced,
        beta,
    })
}

/// Every `β` with `α∘β = id`, in lexicographic order.
pub fn sections(h: &FiniteHomStructure) -> Vec<Section> {
    let fibers = fibers(h);
    if fibers.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let n = h.size();
    let mut out = Vec::new();
    let mut pick = vec![0usize; n];
    loop {
        let beta = (0..n).map(|x| fibers[x][pick[x]]).collect();
        out.push(Section::new(h, beta).expect("fiber elements form a section"));
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < fibers[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// `fibers[v]` lists every `u` with `α(u) = v`, ascending.
fn fibers(h: &FiniteHomStructure) -> Vec<Vec<usize>> {
    let mut fibers = vec![Vec::new(); h.size()];
    for u in 0..h.size() {
        fibers[h.alpha(u)].push(u);
    }
    fibers
}

/// Searches for an associative `·` with `α(x · y) = x ⋆ y`.
///
/// Returns `Ok(None)` when `h` is not hom-associative (a twist is by
/// definition a hom-associative structure) or when no untwist exists.
/// The search assigns cells in row-major order, each from the fiber of
/// `α` over the corresponding entry of `⋆`, and backtracks as soon as a
/// completely assigned associativity triple fails.
pub fn is_twist(h: &FiniteHomStructure) -> Result<Option<Table>, HomError> {
    let n = h.size();
    if n > MAX_TWIST_SEARCH_SIZE {
        return Err(HomError::TooLarge {
            size: n,
            max: MAX_TWIST_SEARCH_SIZE,
        });
    }
    if hom_associativity_violation(h).is_some() {
        return Ok(None);
    }
    let fibers = fibers(h);
    let candidates: Vec<&[usize]> = (0..n * n)
        .map(|k| fibers[h.table().cells()[k] as usize].as_slice())
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(None);
    }

    let mut cells = vec![UNSET; n * n];
    if fill(&mut cells, n, 0, &candidates) {
        let table = Table::from_flat_unchecked(n, cells);
        debug_assert!(table.is_associative());
        Ok(Some(table))
    } else {
        Ok(None)
    }
}

pub(crate) const UNSET: u8 = u8::MAX;

fn fill(cells: &mut [u8], n: usize, k: usize, candidates: &[&[usize]]) -> bool {
    if k == n * n {
        return true;
    }
    for &v in candidates[k] {
        cells[k] = v as u8;
        if partial_associative(cells, n) && fill(cells, n, k + 1, candidates) {
            return true;
        }
    }
    cells[k] = UNSET;
    false
}

/// Associativity on every triple whose four cells are all assigned.
fn partial_associative(cells: &[u8], n: usize) -> bool {
    for x in 0..n {
        for y in 0..n {
            let xy = cells[x * n + y];
            if xy == UNSET {
                continue;
            }
            for z in 0..n {
                let yz = cells[y * n + z];
                if yz == UNSET {
                    continue;
                }
                let l = cells[xy as usize * n + z];
                let r = cells[x * n + yz as usize];
                if l != UNSET && r != UNSET && l != r {
                    return false;
                }
            }
        }
    }
    true
}
