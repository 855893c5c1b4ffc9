//! Search for all structure constants `eps` on `F2[u]` compatible with the
//! Dyer-Lashof Adem relations, plus the binomial identities behind them.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::dyer_lashof::{adem_instance_holds, EpsilonStructure, Preset};
use crate::steenrod::binom_mod2;

/// `C(a, b) mod 2`, zero outside `0 <= b <= a`.
pub fn binom_parity(a: i64, b: i64) -> bool {
    binom_mod2(a, b)
}

/// `sum_k C(k, n-k) C(n+3q, 2k+2q+1) == C(n+3q, 2q-1)` mod 2.
pub fn check_identity_anq(n: i64, q: i64) -> bool {
    a_nq(n, q) == b_nq(n, q)
}

/// `sum_k C(k, n-k) C(n+3q, 2k+2q+1)` mod 2.
pub fn a_nq(n: i64, q: i64) -> bool {
    (0..=n).filter(|&k| binom_parity(k, n - k) && binom_parity(n + 3 * q, 2 * k + 2 * q + 1)).count() % 2 == 1
}

/// `C(n+3q, 2q-1)` mod 2.
pub fn b_nq(n: i64, q: i64) -> bool {
    binom_parity(n + 3 * q, 2 * q - 1)
}

/// Largest structure constant index that can enter the evaluation of the
/// instance `(a, b)` on `u`, over all structures.
pub fn instance_reach(a: u64, b: u64) -> u64 {
    let mut reach = 0;
    let mut probe = |word: &[u64]| {
        // Walk the word right to left, following only nonzero paths of the
        // all-ones structure, and record the largest index touched.
        let mut e = 1u64;
        for &k in word.iter().rev() {
            if k % 2 == 1 {
                return;
            }
            let r = k / 2;
            if r < e {
                return;
            }
            reach = reach.max(max_part(r, e));
            e += r;
        }
    };
    probe(&[a, b]);
    for m in crate::dyer_lashof::dl_adem_reduce(&[a, b]) {
        probe(m.indices());
    }
    reach
}

/// Largest `a_i` in a decomposition `sum a_i 2^i = r` over bits of `n` with all `a_i >= 1`.
fn max_part(r: u64, n: u64) -> u64 {
    let mut best = 0;
    for i in (0..64).filter(|i| n >> i & 1 == 1) {
        let wi = 1u64 << i;
        let others = n - wi;
        if r >= n {
            best = best.max((r - others) / wi);
        }
    }
    best
}

/// A named derived relation that failed, with the index where it failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub relation: &'static str,
    pub index: u64,
}

/// Checks the relations the Adem relations force on `eps` within the stored range.
pub fn structural_constraints(eps: &EpsilonStructure) -> Vec<Violation> {
    let n = eps.cutoff();
    let e = |r: u64| eps.bits()[r as usize];
    let mut out = Vec::new();
    if n >= 2 && e(2) {
        // Q^4 u != 0 forces every constant to be 1.
        for r in 1..=n {
            if !e(r) {
                out.push(Violation { relation: "q4-nonzero-forces-all", index: r });
            }
        }
        return out;
    }
    for r in (2..=n).step_by(2) {
        if e(r) {
            out.push(Violation { relation: "even-vanishing", index: r });
        }
    }
    if n >= 3 {
        for r in (3..=n).step_by(2) {
            if 2 * r < n && (e(3) && e(r)) != e(2 * r + 1) {
                out.push(Violation { relation: "eps3-doubling", index: 2 * r + 1 });
            }
        }
    }
    // Induction on s: vanishing off 1 mod 2^s plus eps_{2^s+1} = 0 gives
    // vanishing off 1 mod 2^{s+1}; vanishing off 1 mod 2^{s+1} gives eps_{2^{s+1}+1} = 0.
    let vanishes_off = |m: u64| (2..=n).all(|r| r % m == 1 || !e(r));
    let mut s = 1u32;
    while (1u64 << s) < n {
        let p = 1u64 << s;
        if vanishes_off(p) && p < n && !e(p + 1) && !vanishes_off(2 * p) {
            let r = (2..=n).find(|&r| r % (2 * p) != 1 && e(r)).unwrap_or(0);
            out.push(Violation { relation: "induction-i", index: r });
        }
        if vanishes_off(2 * p) && 2 * p < n && e(2 * p + 1) {
            out.push(Violation { relation: "induction-ii", index: 2 * p + 1 });
        }
        s += 1;
    }
    if n >= 5 && e(3) {
        // Odd x with x ~ 2x+1; classes with label >= 2 share one value.
        let zeta = e(5);
        for x in (5..=n).step_by(2) {
            if odd_class_label(x) >= 2 && e(x) != zeta {
                out.push(Violation { relation: "common-zeta", index: x });
            }
            if odd_class_label(x) == 0 && !e(x) {
                out.push(Violation { relation: "zeta0", index: x });
            }
        }
    }
    out
}

/// Even label of the class of an odd `x` under `x ~ 2x + 1`.
pub fn odd_class_label(mut x: u64) -> u64 {
    while x % 2 == 1 {
        x = (x - 1) / 2;
    }
    x
}

#[derive(Clone, Debug, Serialize)]
pub struct Elimination {
    pub prefix: String,
    pub instance: (u64, u64),
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub cutoff: u64,
    /// Extra indices searched past the cutoff before truncating.
    pub lookahead: u64,
    /// Distinct truncations to `eps_0..=eps_cutoff` of the surviving prefixes.
    pub survivors: Vec<String>,
    /// Preset name per survivor, when it matches one.
    pub patterns: Vec<Option<&'static str>>,
    /// Surviving prefixes on the full searched range.
    pub raw_survivors: usize,
    /// Adem instances `(a, b)`, `a > 2b`, whose evaluation stays in the searched range.
    pub instances_checked: usize,
    /// Instances with `a + b <= 2 cutoff` that need constants past the searched range.
    pub instances_skipped: usize,
    pub eliminations: Vec<Elimination>,
    /// Derived-relation violations per survivor (expected empty).
    pub survivor_constraints: Vec<Vec<Violation>>,
}

/// Indices searched past the cutoff. The last stored constant is only pinned
/// down by instances that reach one index further.
pub const LOOKAHEAD: u64 = 2;

/// Extends prefixes `eps_0..=eps_r` one index at a time up to
/// `cutoff + LOOKAHEAD`, keeping those that satisfy every Adem instance
/// `Q^a Q^b u` whose evaluation reaches exactly index `r`, then truncates the
/// survivors to `eps_0..=eps_cutoff`.
pub fn enumerate_structures(cutoff: u64) -> ClassificationReport {
    assert!(cutoff >= 4, "cutoff must be at least 4");
    let range = cutoff + LOOKAHEAD;
    // b <= 2 range + 1 and a <= 4 range + 4 cover every reach up to the range.
    let mut by_reach: BTreeMap<u64, Vec<(u64, u64)>> = BTreeMap::new();
    let mut skipped = 0usize;
    for b in 0..=(2 * range + 1) {
        for a in (2 * b + 1)..=(4 * range + 4) {
            let reach = instance_reach(a, b);
            if reach <= range {
                by_reach.entry(reach).or_default().push((a, b));
            } else if a + b <= 2 * cutoff {
                skipped += 1;
            }
        }
    }
    let mut prefixes: Vec<Vec<bool>> = vec![vec![false, true]];
    let mut eliminations = Vec::new();
    let mut checked = 0usize;
    for r in 0..=range {
        if r >= 2 {
            prefixes = prefixes
                .into_iter()
                .flat_map(|p| {
                    let mut a = p.clone();
                    a.push(false);
                    let mut b = p;
                    b.push(true);
                    [a, b]
                })
                .collect();
        }
        let instances = by_reach.get(&r).cloned().unwrap_or_default();
        checked += instances.len();
        let results: Vec<(Vec<bool>, Option<(u64, u64)>)> = prefixes
            .into_par_iter()
            .map(|p| {
                let eps = EpsilonStructure::new(p.clone()).expect("anchored");
                let bad = instances.iter().copied().find(|&(a, b)| match adem_instance_holds(&eps, a, b) {
                    Ok(ok) => !ok,
                    Err(e) => panic!("instance ({a},{b}) at reach {r}: {e}"),
                });
                (p, bad)
            })
            .collect();
        prefixes = Vec::new();
        for (p, bad) in results {
            match bad {
                None => prefixes.push(p),
                Some(inst) => eliminations.push(Elimination {
                    prefix: EpsilonStructure::new(p).expect("anchored").to_string(),
                    instance: inst,
                }),
            }
        }
    }
    let raw_survivors = prefixes.len();
    let mut truncated: Vec<Vec<bool>> = prefixes.into_iter().map(|p| p[..=cutoff as usize].to_vec()).collect();
    truncated.sort();
    truncated.dedup();
    let survivors: Vec<EpsilonStructure> =
        truncated.into_iter().map(|p| EpsilonStructure::new(p).expect("anchored")).collect();
    ClassificationReport {
        cutoff,
        lookahead: LOOKAHEAD,
        patterns: survivors.iter().map(|s| Preset::ALL.into_iter().find(|&p| s.matches(p)).map(Preset::name)).collect(),
        survivor_constraints: survivors.iter().map(structural_constraints).collect(),
        survivors: survivors.iter().map(ToString::to_string).collect(),
        raw_survivors,
        instances_checked: checked,
        instances_skipped: skipped,
        eliminations,
    }
}

/// Adem instances `(a, b)` with `a > 2b`, `a + b <= max_sum` that fail for
/// `eps`, and the number that could not be evaluated within its cutoff.
pub fn adem_violations(eps: &EpsilonStructure, max_sum: u64) -> (Vec<(u64, u64)>, usize) {
    let mut bad = Vec::new();
    let mut skipped = 0;
    for b in 0..=max_sum / 3 {
        for a in (2 * b + 1)..=(max_sum - b) {
            match adem_instance_holds(eps, a, b) {
                Ok(true) => {}
                Ok(false) => bad.push((a, b)),
                Err(_) => skipped += 1,
            }
        }
    }
    (bad, skipped)
}
