//! Exhaustive enumeration of finite hom-structures.
//!
//! The search runs over twisting maps first (lexicographic order), then over
//! table cells in row-major order. When hom-associativity is required, a
//! partial table is abandoned as soon as any triple whose four cells are
//! assigned violates `α(x)⋆(y⋆z) = (x⋆y)⋆α(z)`. Work is split into
//! independent subtasks by twisting map and a prefix of the first row; the
//! merge is ordered so output is identical for every thread count.

use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use crate::identities::is_strongly_degenerate;
use crate::par::{self, Execution};
use crate::structure::{FiniteHomStructure, Table};
use crate::twist::{is_twist, MAX_TWIST_SEARCH_SIZE, UNSET};

pub mod canonical;

pub use canonical::{canonicalize, relabel, CanonicalForm};

/// Largest size for a pruned search over every twisting map.
pub const MAX_SIZE: usize = 4;
/// Largest size for a pruned search with a fixed twisting map.
pub const MAX_SIZE_FIXED_ALPHA: usize = 5;
/// Largest size when hom-associativity is not required (no pruning).
pub const MAX_SIZE_UNPRUNED: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("size {size} is over the search budget of {max} ({reason})")]
    OverBudget {
        size: usize,
        max: usize,
        reason: &'static str,
    },
    #[error("size must be at least 1")]
    Empty,
    #[error("fixed alpha {0:?} is not a self-map of the carrier")]
    InvalidAlpha(Vec<usize>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaFilter {
    #[default]
    Any,
    Surjective,
    Identity,
    Fixed(Vec<usize>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DegeneracyFilter {
    #[default]
    Any,
    StronglyDegenerate,
    NotStronglyDegenerate,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistFilter {
    #[default]
    Any,
    Twist,
    NonTwist,
}

/// Conjunctive filters for a search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConstraints {
    pub size: usize,
    pub require_hom_associative: bool,
    pub alpha_filter: AlphaFilter,
    pub degeneracy_filter: DegeneracyFilter,
    pub twist_filter: TwistFilter,
    /// Keep one representative per isomorphism class: the structure that is
    /// least among its relabelings admitted by `alpha_filter`.
    pub canonical_only: bool,
}

impl SearchConstraints {
    pub fn new(size: usize) -> Self {
        Self {
            size,
            require_hom_associative: true,
            alpha_filter: AlphaFilter::Any,
            degeneracy_filter: DegeneracyFilter::Any,
            twist_filter: TwistFilter::Any,
            canonical_only: false,
        }
    }

    pub fn alpha(mut self, f: AlphaFilter) -> Self {
        self.alpha_filter = f;
        self
    }

    pub fn degeneracy(mut self, f: DegeneracyFilter) -> Self {
        self.degeneracy_filter = f;
        self
    }

    pub fn twist(mut self, f: TwistFilter) -> Self {
        self.twist_filter = f;
        self
    }

    pub fn canonical(mut self, on: bool) -> Self {
        self.canonical_only = on;
        self
    }

    pub fn hom_associative(mut self, on: bool) -> Self {
        self.require_hom_associative = on;
        self
    }

    fn validate(&self) -> Result<(), SearchError> {
        let n = self.size;
        if n == 0 {
            return Err(SearchError::Empty);
        }
        if let AlphaFilter::Fixed(a) = &self.alpha_filter {
            if a.len() != n || a.iter().any(|&v| v >= n) {
                return Err(SearchError::InvalidAlpha(a.clone()));
            }
        }
        let (max, reason) = if !self.require_hom_associative {
            (MAX_SIZE_UNPRUNED, "unpruned search")
        } else if matches!(self.alpha_filter, AlphaFilter::Fixed(_)) {
            (MAX_SIZE_FIXED_ALPHA, "fixed alpha")
        } else {
            (MAX_SIZE, "full table search")
        };
        let max = if self.twist_filter != TwistFilter::Any {
            max.min(MAX_TWIST_SEARCH_SIZE)
        } else {
            max
        };
        if n > max {
            return Err(SearchError::OverBudget {
                size: n,
                max,
                reason,
            });
        }
        Ok(())
    }
}

/// Twisting maps admitted by `filter`, in lexicographic order.
pub fn alpha_candidates(n: usize, filter: &AlphaFilter) -> Vec<Vec<u8>> {
    match filter {
        AlphaFilter::Identity => vec![(0..n as u8).collect()],
        AlphaFilter::Fixed(a) => vec![a.iter().map(|&v| v as u8).collect()],
        AlphaFilter::Any | AlphaFilter::Surjective => {
            let total = n.pow(n as u32);
            (0..total)
                .map(|mut code| {
                    let mut a = vec![0u8; n];
                    for slot in a.iter_mut().rev() {
                        *slot = (code % n) as u8;
                        code /= n;
                    }
                    a
                })
                .filter(|a| *filter == AlphaFilter::Any || is_permutation(a))
                .collect()
        }
    }
}

fn is_permutation(a: &[u8]) -> bool {
    let mut seen = vec![false; a.len()];
    a.iter()
        .all(|&v| !std::mem::replace(&mut seen[v as usize], true))
}

/// A unit of independent work: one twisting map and a fixed prefix of cells.
#[derive(Clone, Debug)]
struct Task {
    alpha: Vec<u8>,
    prefix: Vec<u8>,
}

struct Plan {
    constraints: SearchConstraints,
    relabelings: Vec<Vec<usize>>,
    tasks: Vec<Task>,
}

impl Plan {
    fn new(c: &SearchConstraints, exec: Execution) -> Result<Self, SearchError> {
        c.validate()?;
        let n = c.size;
        let alphas = alpha_candidates(n, &c.alpha_filter);
        // Split by a prefix of the first row until there are enough tasks.
        let mut prefix_len = 0;
        if exec.is_parallel() {
            while prefix_len < n && alphas.len() * n.pow(prefix_len as u32) < 64 {
                prefix_len += 1;
            }
        }
        let prefixes = all_words(n, prefix_len);
        let tasks = alphas
            .iter()
            .flat_map(|a| {
                prefixes.iter().map(move |p| Task {
                    alpha: a.clone(),
                    prefix: p.clone(),
                })
            })
            .collect();
        let relabelings = if c.canonical_only {
            let perms = canonical::permutations(n);
            match &c.alpha_filter {
                // Only relabelings commuting with the fixed map keep it fixed.
                AlphaFilter::Fixed(a) => perms
                    .into_iter()
                    .filter(|s| (0..n).all(|x| s[a[x]] == a[s[x]]))
                    .collect(),
                _ => perms,
            }
        } else {
            Vec::new()
        };
        Ok(Self {
            constraints: c.clone(),
            relabelings,
            tasks,
        })
    }

    fn accept(&self, h: &FiniteHomStructure) -> bool {
        let c = &self.constraints;
        let degeneracy_ok = match c.degeneracy_filter {
            DegeneracyFilter::Any => true,
            DegeneracyFilter::StronglyDegenerate => is_strongly_degenerate(h),
            DegeneracyFilter::NotStronglyDegenerate => !is_strongly_degenerate(h),
        };
        if !degeneracy_ok {
            return false;
        }
        if c.canonical_only && !canonical::is_least_under(h, &self.relabelings) {
            return false;
        }
        match c.twist_filter {
            TwistFilter::Any => true,
            filter => {
                let found = is_twist(h).expect("size validated").is_some();
                found == (filter == TwistFilter::Twist)
            }
        }
    }

    fn run_task(
        &self,
        task: &Task,
        visit: &mut dyn FnMut(FiniteHomStructure) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let n = self.constraints.size;
        let mut cells = vec![UNSET; n * n];
        cells[..task.prefix.len()].copy_from_slice(&task.prefix);
        let mut search = TaskSearch {
            plan: self,
            alpha: &task.alpha,
            n,
            cells,
            prune: self.constraints.require_hom_associative,
            visit,
        };
        if search.prune && !search.consistent() {
            return ControlFlow::Continue(());
        }
        search.descend(task.prefix.len())
    }
}

fn all_words(n: usize, len: usize) -> Vec<Vec<u8>> {
    (0..len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|w| {
                (0..n as u8).map(move |v| {
                    let mut w = w.clone();
                    w.push(v);
                    w
                })
            })
            .collect()
    })
}

struct TaskSearch<'a> {
    plan: &'a Plan,
    alpha: &'a [u8],
    n: usize,
    cells: Vec<u8>,
    prune: bool,
    visit: &'a mut dyn FnMut(FiniteHomStructure) -> ControlFlow<()>,
}

impl TaskSearch<'_> {
    fn descend(&mut self, k: usize) -> ControlFlow<()> {
        if k == self.n * self.n {
            let h = FiniteHomStructure::from_parts_unchecked(
                Table::from_flat_unchecked(self.n, self.cells.clone()),
                self.alpha.to_vec(),
            );
            if self.plan.accept(&h) {
                return (self.visit)(h);
            }
            return ControlFlow::Continue(());
        }
        for v in 0..self.n as u8 {
            self.cells[k] = v;
            if !self.prune || self.consistent() {
                self.descend(k + 1)?;
            }
        }
        self.cells[k] = UNSET;
        ControlFlow::Continue(())
    }

    /// Hom-associativity on every triple whose cells are all assigned.
    fn consistent(&self) -> bool {
        let n = self.n;
        let cells = &self.cells;
        let alpha = self.alpha;
        for x in 0..n {
            let ax = alpha[x] as usize;
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
                    let l = cells[ax * n + yz as usize];
                    let r = cells[xy as usize * n + alpha[z] as usize];
                    if l != UNSET && r != UNSET && l != r {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Every structure satisfying `c`, in `(alpha, table)` lexicographic order.
pub fn enumerate(c: &SearchConstraints) -> Result<Vec<FiniteHomStructure>, SearchError> {
    enumerate_with(c, Execution::default())
}

pub fn enumerate_with(
    c: &SearchConstraints,
    exec: Execution,
) -> Result<Vec<FiniteHomStructure>, SearchError> {
    let plan = Plan::new(c, exec)?;
    let chunks = par::map(exec, &plan.tasks, |task| {
        let mut out = Vec::new();
        let _ = plan.run_task(task, &mut |h| {
            out.push(h);
            ControlFlow::Continue(())
        });
        out
    });
    Ok(chunks.into_iter().flatten().collect())
}

/// Streams results to `visit` on the calling thread, in enumeration order,
/// stopping early when `visit` breaks.
pub fn visit(
    c: &SearchConstraints,
    mut visit: impl FnMut(FiniteHomStructure) -> ControlFlow<()>,
) -> Result<(), SearchError> {
    let plan = Plan::new(c, Execution::Sequential)?;
    for task in &plan.tasks {
        if plan.run_task(task, &mut visit).is_break() {
            break;
        }
    }
    Ok(())
}

pub fn count(c: &SearchConstraints) -> Result<u64, SearchError> {
    count_with(c, Execution::default())
}

pub fn count_with(c: &SearchConstraints, exec: Execution) -> Result<u64, SearchError> {
    let plan = Plan::new(c, exec)?;
    let counts = par::map(exec, &plan.tasks, |task| {
        let mut k = 0u64;
        let _ = plan.run_task(task, &mut |_| {
            k += 1;
            ControlFlow::Continue(())
        });
        k
    });
    Ok(counts.into_iter().sum())
}

/// The first structure (in enumeration order) satisfying `c`.
pub fn hunt(c: &SearchConstraints) -> Result<Option<FiniteHomStructure>, SearchError> {
    hunt_with(c, Execution::default())
}

pub fn hunt_with(
    c: &SearchConstraints,
    exec: Execution,
) -> Result<Option<FiniteHomStructure>, SearchError> {
    let plan = Plan::new(c, exec)?;
    Ok(par::find_map_first(exec, &plan.tasks, |task| {
        let mut found = None;
        let _ = plan.run_task(task, &mut |h| {
            found = Some(h);
            ControlFlow::Break(())
        });
        found
    }))
}
