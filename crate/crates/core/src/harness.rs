//! Exhaustive verification sweeps over the enumeration.
//!
//! Each sweep visits every hom-associative structure of size `1..=max_n`
//! with surjective `α` and reports per-size tallies plus every violation.
//! A violation means the implementation is wrong somewhere.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::identities::{
    check_all, check_context_associativity, check_helper_identities, is_strongly_degenerate,
    IdentityCheck,
};
use crate::par::{self, Execution};
use crate::search::{self, AlphaFilter, SearchConstraints, SearchError};
use crate::structure::{FiniteHomStructure, Section};
use crate::twist::{is_twist, sections, twist, untwist_via_section};
use crate::HomError;

/// Largest bound accepted by [`check_successor_example`]; the check visits
/// `(bound + 1)³` triples.
pub const MAX_SUCCESSOR_BOUND: u64 = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error("bound {0} must be at least 2")]
    BoundTooSmall(u64),
    #[error("bound {bound} is over the budget of {max}")]
    BoundTooLarge { bound: u64, max: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<FiniteHomStructure>,
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuple: Option<Vec<usize>>,
}

/// Named counters keyed by size (or bound).
pub type Tallies = BTreeMap<u64, BTreeMap<&'static str, u64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub proposition: &'static str,
    pub sizes: Tallies,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

impl HarnessReport {
    fn new(proposition: &'static str, sizes: Tallies, violations: Vec<Violation>) -> Self {
        Self {
            proposition,
            pass: violations.is_empty(),
            sizes,
            violations,
        }
    }

    pub fn tally(&self, size: u64, key: &str) -> u64 {
        self.sizes
            .get(&size)
            .and_then(|t| t.get(key))
            .copied()
            .unwrap_or(0)
    }
}

#[derive(Default)]
struct Outcome {
    counts: BTreeMap<&'static str, u64>,
    violations: Vec<Violation>,
}

impl Outcome {
    fn bump(&mut self, key: &'static str) {
        *self.counts.entry(key).or_default() += 1;
    }

    fn add(&mut self, key: &'static str, by: u64) {
        *self.counts.entry(key).or_default() += by;
    }

    fn fail(
        &mut self,
        h: &FiniteHomStructure,
        check: impl Into<String>,
        tuple: Option<Vec<usize>>,
    ) {
        self.violations.push(Violation {
            structure: Some(h.clone()),
            check: check.into(),
            tuple,
        });
    }

    fn record(&mut self, h: &FiniteHomStructure, check: IdentityCheck) {
        self.add("tuples", check.tuples);
        if let Some(t) = check.violation {
            self.fail(h, check.name, Some(t));
        }
    }

    fn merge(&mut self, other: Outcome) {
        for (k, v) in other.counts {
            self.add(k, v);
        }
        self.violations.extend(other.violations);
    }
}

fn sweep(
    name: &'static str,
    max_n: usize,
    exec: Execution,
    check: impl Fn(&FiniteHomStructure) -> Result<Outcome, HomError> + Sync + Send,
    per_size: impl Fn(usize, &mut Outcome),
) -> Result<HarnessReport, HarnessError> {
    let mut sizes = Tallies::new();
    let mut violations = Vec::new();
    for n in 1..=max_n {
        let c = SearchConstraints::new(n).alpha(AlphaFilter::Surjective);
        let structures = search::enumerate_with(&c, exec)?;
        let mut total = Outcome::default();
        total.add("checked", structures.len() as u64);
        per_size(n, &mut total);
        for outcome in par::map(exec, &structures, |h| check(h)) {
            total.merge(outcome?);
        }
        sizes.insert(n as u64, total.counts);
        violations.extend(total.violations);
    }
    Ok(HarnessReport::new(name, sizes, violations))
}

/// Every structure is a twist or strongly degenerate, and when it is not
/// strongly degenerate its section is unique, `β(x⋆y)` is associative and
/// twisting it back by `α` reproduces `⋆`.
///
/// Tallies per size: `checked`, `twist`, `strongly_degenerate`, `both`,
/// `strongly_degenerate_non_twist`, `untwisted`.
pub fn verify_twist_dichotomy(max_n: usize) -> Result<HarnessReport, HarnessError> {
    verify_twist_dichotomy_with(max_n, Execution::default())
}

pub fn verify_twist_dichotomy_with(
    max_n: usize,
    exec: Execution,
) -> Result<HarnessReport, HarnessError> {
    sweep("1", max_n, exec, dichotomy_one, |_, _| {})
}

fn dichotomy_one(h: &FiniteHomStructure) -> Result<Outcome, HomError> {
    let mut out = Outcome::default();
    let is_tw = is_twist(h)?.is_some();
    let strong = is_strongly_degenerate(h);
    for (flag, key) in [
        (is_tw, "twist"),
        (strong, "strongly_degenerate"),
        (is_tw && strong, "both"),
        (strong && !is_tw, "strongly_degenerate_non_twist"),
    ] {
        if flag {
            out.bump(key);
        } else {
            out.add(key, 0);
        }
    }
    if !is_tw && !strong {
        out.fail(h, "neither twist nor strongly degenerate", None);
    }
    if !strong {
        let all = sections(h);
        if all.len() != 1 {
            out.fail(
                h,
                format!("expected a unique section, found {}", all.len()),
                None,
            );
        }
        for beta in &all {
            let u = untwist_via_section(h, beta)?;
            if !u.associative {
                out.fail(
                    h,
                    "induced multiplication is not associative",
                    Some(beta.as_slice().to_vec()),
                );
                continue;
            }
            if twist(&u.induced_table, &h.alpha_map())? != *h {
                out.fail(
                    h,
                    "twist of the untwist differs",
                    Some(beta.as_slice().to_vec()),
                );
                continue;
            }
            out.bump("untwisted");
        }
    }
    Ok(out)
}

/// The four context-associativity conditions and the helper identities for
/// every structure and every section.
///
/// Tallies per size: `checked`, `sections`, `tuples`.
pub fn verify_context_associativity(max_n: usize) -> Result<HarnessReport, HarnessError> {
    verify_context_associativity_with(max_n, Execution::default())
}

pub fn verify_context_associativity_with(
    max_n: usize,
    exec: Execution,
) -> Result<HarnessReport, HarnessError> {
    sweep("lemma1", max_n, exec, context_one, |_, _| {})
}

fn context_one(h: &FiniteHomStructure) -> Result<Outcome, HomError> {
    let mut out = Outcome::default();
    for beta in sections(h) {
        out.bump("sections");
        let reports = [
            check_context_associativity(h, &beta)?,
            check_helper_identities(h, &beta)?,
        ];
        for check in reports.into_iter().flat_map(|r| r.checks) {
            out.record(h, check);
        }
    }
    Ok(out)
}

/// Bijectivity of `α` for a surjective twisting map.
///
/// On a finite carrier the conclusion holds for every self-map, which is
/// confirmed directly (`surjective_maps`, all found injective). The
/// substantive part checks, for every structure and section `β`:
/// `β∘α = id` when not strongly degenerate, the section-absorption
/// identities, and both case chains on all `(a, b, c, ξ)`.
///
/// Tallies per size: `checked`, `surjective_maps`, `sections`,
/// `strongly_degenerate`, `tuples`.
pub fn verify_twisting_injectivity(max_n: usize) -> Result<HarnessReport, HarnessError> {
    verify_twisting_injectivity_with(max_n, Execution::default())
}

pub fn verify_twisting_injectivity_with(
    max_n: usize,
    exec: Execution,
) -> Result<HarnessReport, HarnessError> {
    sweep("2", max_n, exec, injectivity_one, |n, out| {
        for alpha in search::alpha_candidates(n, &AlphaFilter::Any) {
            let mut hits = vec![0u32; n];
            for &a in &alpha {
                hits[a as usize] += 1;
            }
            if hits.iter().all(|&c| c > 0) {
                out.bump("surjective_maps");
                if hits.iter().any(|&c| c > 1) {
                    out.violations.push(Violation {
                        structure: None,
                        check: "surjective map is not injective".into(),
                        tuple: Some(alpha.iter().map(|&a| a as usize).collect()),
                    });
                }
            }
        }
    })
}

fn injectivity_one(h: &FiniteHomStructure) -> Result<Outcome, HomError> {
    let mut out = Outcome::default();
    let n = h.size();
    let strong = is_strongly_degenerate(h);
    if strong {
        out.bump("strongly_degenerate");
    }
    for beta in sections(h) {
        out.bump("sections");
        if !strong {
            if let Some(x) = (0..n).find(|&x| beta.apply(h.alpha(x)) != x) {
                out.fail(h, "beta(alpha(x)) != x", Some(vec![x]));
            }
        }
        for check in check_helper_identities(h, &beta)?.checks {
            if check.name.starts_with("section-absorption") {
                out.record(h, check);
            }
        }
        for check in case_chains(h, &beta) {
            out.record(h, check);
        }
    }
    Ok(out)
}

type Expr = fn(&Ops, usize, usize, usize, usize) -> usize;

struct Ops<'a> {
    h: &'a FiniteHomStructure,
    beta: &'a Section,
}

impl Ops<'_> {
    fn m(&self, x: usize, y: usize) -> usize {
        self.h.mul(x, y)
    }
    fn a(&self, x: usize) -> usize {
        self.h.alpha(x)
    }
    fn b(&self, x: usize) -> usize {
        self.beta.apply(x)
    }
}

/// `c⋆((b⋆ξ)⋆a) = … = c⋆((b⋆βαξ)⋆a)`, arguments `(a, b, c, ξ)`.
const CASE_ONE: [(&str, Expr); 4] = [
    ("case-1 c*((b*x)*a)", |o, a, b, c, x| {
        o.m(c, o.m(o.m(b, x), a))
    }),
    ("case-1 (Bc*(b*x))*Aa", |o, a, b, c, x| {
        o.m(o.m(o.b(c), o.m(b, x)), o.a(a))
    }),
    ("case-1 (Bc*(b*BAx))*Aa", |o, a, b, c, x| {
        o.m(o.m(o.b(c), o.m(b, o.b(o.a(x)))), o.a(a))
    }),
    ("case-1 c*((b*BAx)*a)", |o, a, b, c, x| {
        o.m(c, o.m(o.m(b, o.b(o.a(x))), a))
    }),
];

/// `((b⋆ξ)⋆a)⋆c = … = ((b⋆βαξ)⋆a)⋆c`, arguments `(a, b, c, ξ)`.
const CASE_TWO: [(&str, Expr); 9] = [
    ("case-2 ((b*x)*a)*c", |o, a, b, c, x| {
        o.m(o.m(o.m(b, x), a), c)
    }),
    ("case-2 (Ab*(x*Ba))*c", |o, a, b, c, x| {
        o.m(o.m(o.a(b), o.m(x, o.b(a))), c)
    }),
    ("case-2 (BAAb*(x*Ba))*c", |o, a, b, c, x| {
        o.m(o.m(o.b(o.a(o.a(b))), o.m(x, o.b(a))), c)
    }),
    ("case-2 AAb*((x*Ba)*Bc)", |o, a, b, c, x| {
        o.m(o.a(o.a(b)), o.m(o.m(x, o.b(a)), o.b(c)))
    }),
    ("case-2 AAb*((x*Ba)*ABBc)", |o, a, b, c, x| {
        o.m(o.a(o.a(b)), o.m(o.m(x, o.b(a)), o.a(o.b(o.b(c)))))
    }),
    ("case-2 AAb*(Ax*(Ba*BBc))", |o, a, b, c, x| {
        o.m(o.a(o.a(b)), o.m(o.a(x), o.m(o.b(a), o.b(o.b(c)))))
    }),
    ("case-2 AAb*((BAx*Ba)*Bc)", |o, a, b, c, x| {
        o.m(o.a(o.a(b)), o.m(o.m(o.b(o.a(x)), o.b(a)), o.b(c)))
    }),
    ("case-2 (Ab*(BAx*Ba))*c", |o, a, b, c, x| {
        o.m(o.m(o.a(b), o.m(o.b(o.a(x)), o.b(a))), c)
    }),
    ("case-2 ((b*BAx)*a)*c", |o, a, b, c, x| {
        o.m(o.m(o.m(b, o.b(o.a(x))), a), c)
    }),
];

/// One check per consecutive step of each chain, every step over all
/// `(a, b, c, ξ)`. Step names are the right-hand expression.
pub fn case_chains(h: &FiniteHomStructure, beta: &Section) -> Vec<IdentityCheck> {
    let o = Ops { h, beta };
    let n = h.size();
    let mut out = Vec::new();
    for chain in [&CASE_ONE[..], &CASE_TWO[..]] {
        for w in chain.windows(2) {
            let (lhs, (name, rhs)) = (w[0].1, w[1]);
            out.push(check_all(name, n, 4, |t| {
                lhs(&o, t[0], t[1], t[2], t[3]) == rhs(&o, t[0], t[1], t[2], t[3])
            }));
        }
    }
    out
}

/// `(ℕ, +, x ↦ x + shift)` on `0..=bound`.
///
/// Checks `α(x) + (y + z) = (x + y) + α(z)` exactly on every triple and
/// whether the fiber of `α` over `0 = 0 + 0` is empty. An empty fiber rules
/// out a twist, since every product of a twist lies in the image of `α`.
/// With `shift = 0` the twist verdict instead rests on associativity of
/// addition, checked on the same triples.
///
/// Tallies under key `bound`: `triples`, `hom_associative`,
/// `zero_fiber_size`, `twist`.
pub fn check_successor_example(bound: u64, shift: u64) -> Result<HarnessReport, HarnessError> {
    check_successor_example_with(bound, shift, Execution::default())
}

pub fn check_successor_example_with(
    bound: u64,
    shift: u64,
    exec: Execution,
) -> Result<HarnessReport, HarnessError> {
    if bound < 2 {
        return Err(HarnessError::BoundTooSmall(bound));
    }
    if bound > MAX_SUCCESSOR_BOUND {
        return Err(HarnessError::BoundTooLarge {
            bound,
            max: MAX_SUCCESSOR_BOUND,
        });
    }
    // Every intermediate sum is at most 3·bound + shift; once that fits,
    // wrapping u64 arithmetic never wraps and is exact on all triples.
    let largest = bound
        .checked_mul(3)
        .and_then(|b| b.checked_add(shift))
        .ok_or(HarnessError::BoundTooLarge {
            bound,
            max: (u64::MAX - shift) / 3,
        })?;
    debug_assert!(largest >= bound);
    let alpha = |x: u64| x.wrapping_add(shift);
    let add = u64::wrapping_add;
    let xs: Vec<u64> = (0..=bound).collect();
    let failures = par::map(exec, &xs, |&x| {
        for y in 0..=bound {
            let fails = |z: u64| {
                (add(alpha(x), add(y, z)) != add(add(x, y), alpha(z)))
                    | (add(add(x, y), z) != add(x, add(y, z)))
            };
            // Branch-free scan first; locate the triple only on failure.
            if (0..=bound).fold(false, |acc, z| acc | fails(z)) {
                let z = (0..=bound).find(|&z| fails(z)).expect("a failing z exists");
                return Some(vec![x as usize, y as usize, z as usize]);
            }
        }
        None
    });
    let mut violations: Vec<Violation> = failures
        .into_iter()
        .flatten()
        .take(1)
        .map(|t| Violation {
            structure: None,
            check: "alpha(x)+(y+z) = (x+y)+alpha(z)".into(),
            tuple: Some(t),
        })
        .collect();
    let hom_associative = violations.is_empty();
    let zero_fiber = (0..=bound).filter(|&x| alpha(x) == 0).count() as u64;
    let zero_is_product = 0u64.checked_add(0) == Some(0);
    let is_twist = if zero_fiber == 0 && zero_is_product {
        false
    } else {
        // α is the identity here, so the untwist is `+` itself.
        shift == 0 && hom_associative
    };
    if shift >= 1 && zero_fiber != 0 {
        violations.push(Violation {
            structure: None,
            check: "fiber over 0 is not empty".into(),
            tuple: None,
        });
    }
    let counts = BTreeMap::from([
        ("triples", (bound + 1).pow(3)),
        ("hom_associative", hom_associative as u64),
        ("zero_fiber_size", zero_fiber),
        ("twist", is_twist as u64),
    ]);
    Ok(HarnessReport::new(
        "nat",
        BTreeMap::from([(bound, counts)]),
        violations,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_one_sweeps() {
        let r = verify_twist_dichotomy(1).unwrap();
        assert!(r.pass);
        assert_eq!(r.tally(1, "checked"), 1);
        assert_eq!(r.tally(1, "twist"), 1);
        assert!(verify_twisting_injectivity(1).unwrap().pass);
        assert!(verify_context_associativity(1).unwrap().pass);
    }

    #[test]
    fn successor_example_verdicts() {
        let r = check_successor_example(2, 1).unwrap();
        assert!(r.pass);
        assert_eq!(r.tally(2, "triples"), 27);
        assert_eq!(r.tally(2, "hom_associative"), 1);
        assert_eq!(r.tally(2, "zero_fiber_size"), 0);
        assert_eq!(r.tally(2, "twist"), 0);
        let id = check_successor_example(10, 0).unwrap();
        assert_eq!(id.tally(10, "twist"), 1);
        assert_eq!(id.tally(10, "zero_fiber_size"), 1);
    }

    #[test]
    fn successor_bounds() {
        assert_eq!(
            check_successor_example(1, 1),
            Err(HarnessError::BoundTooSmall(1))
        );
        assert!(matches!(
            check_successor_example(MAX_SUCCESSOR_BOUND + 1, 1),
            Err(HarnessError::BoundTooLarge { .. })
        ));
    }

    #[test]
    fn chains_detect_a_broken_section() {
        // Not hom-associative, so some step of the chains must fail.
        let h = FiniteHomStructure::from_rows(&[vec![1, 0], vec![0, 0]], &[1, 0]).unwrap();
        let beta = Section::new(&h, vec![1, 0]).unwrap();
        assert!(case_chains(&h, &beta).iter().any(|c| c.violation.is_some()));
    }

    #[test]
    fn report_json_shape() {
        let r = verify_twist_dichotomy(1).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["proposition"], "1");
        assert_eq!(v["pass"], true);
        assert_eq!(v["sizes"]["1"]["checked"], 1);
    }
}
