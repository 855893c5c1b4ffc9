//! Reproducible batch checks shared by the command line, the Python bindings
//! and the acceptance suite. Each check lists expected-vs-computed items.

use std::fmt::{self, Display};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::burnside::{self, units_complex_homology, BurnsideElem, BurnsideRing, Variant};
use crate::dl_classify::{a_nq, b_nq, binom_parity, check_identity_anq, enumerate_structures};
use crate::dyer_lashof::dl_adem_reduce;
use crate::ghm::{self, build_complex, check_conjecture, homology_probe, homotopy_table, is_nonzero_class, Ambient, ChartOptions};
use crate::padic::{default_generator, PadicInt};
use crate::reference;
use crate::reprings::{self, alpha, beta, gamma, j_complex_homology, j_groups, ktheory_complex_check, psi_l_kernel, transfer_k, CharElem};
use crate::steenrod::{adem_reduce, Convention, SqMonomial, SteenrodElement};
use crate::zplinalg::AbGroup;

/// One compared quantity.
#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

impl Item {
    pub fn eq(name: impl Into<String>, expected: impl Display, computed: impl Display) -> Self {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        Item { name: name.into(), pass: expected == computed, expected, computed }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Item::eq(name, true, ok)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub id: String,
    /// The published statement this check targets.
    pub claim: String,
    pub pass: bool,
    pub items: Vec<Item>,
    pub notes: Vec<String>,
}

impl CheckResult {
    pub fn new(id: &str, claim: &str, items: Vec<Item>) -> Self {
        let pass = items.iter().all(|i| i.pass);
        CheckResult { id: id.into(), claim: claim.into(), pass, items, notes: Vec::new() }
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> Self {
        self.notes = notes;
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &Item> {
        self.items.iter().filter(|i| !i.pass)
    }
}

impl Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.items.len();
        let bad = self.failures().count();
        writeln!(f, "{} {} ({}/{} items) -- {}", if self.pass { "PASS" } else { "FAIL" }, self.id, n - bad, n, self.claim)?;
        for i in self.failures() {
            writeln!(f, "  - {}", i.name)?;
            writeln!(f, "    expected: {}", i.expected)?;
            writeln!(f, "    computed: {}", i.computed)?;
        }
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        Ok(())
    }
}

fn list<T: Display>(xs: &[T]) -> String {
    format!("({})", xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

/// Default stem window for the `u^{m+1}` chart.
pub fn default_chart_options(m: u32) -> ChartOptions {
    ChartOptions::truncated(m).window((-1, 2 * m as i32), (0, 2))
}

/// `d1^2 = 0`, and with `compare` the classes and arrows against the
/// published `m = 5` picture.
pub fn chart_check(options: &ChartOptions, compare: bool) -> Result<CheckResult, ghm::GhmError> {
    let c = build_complex(options)?;
    let mut items = vec![Item::flag("d1 squares to zero", c.check_d1_squared().is_ok())];
    if compare {
        let d = reference::compare_chart(&c, reference::CHART_M5_CLASSES, reference::CHART_M5_ARROWS);
        items.push(Item::eq("classes missing from the computed chart", "[]", format!("{:?}", d.missing_classes)));
        items.push(Item::eq("classes absent from the published chart", "[]", format!("{:?}", d.extra_classes)));
        items.push(Item::eq("arrows missing", "[]", format!("{:?}", d.missing_arrows)));
        items.push(Item::eq("arrows extra", "[]", format!("{:?}", d.extra_arrows)));
    }
    let claim = match options.truncation {
        ghm::Truncation::Finite(m) => format!("E1 page for F2[u]/u^{} with its d1 arrows", m + 1),
        ghm::Truncation::Unbounded { .. } => "E1 page for F2[u] with its d1 arrows".to_string(),
    };
    Ok(CheckResult::new("chart", &claim, items))
}

/// The homotopy table against the published columns, with collapse.
pub fn table_check(n_max: u32, slack: u32) -> Result<CheckResult, ghm::GhmError> {
    let t = homotopy_table(n_max, &ChartOptions::truncated(1).slack(slack))?;
    let mut items = Vec::new();
    for col in &t {
        if let Some(published) = reference::TABLE.get(col.n as usize - 1) {
            items.push(Item::eq(format!("n={} dims pi_0..pi_{}", col.n, 2 * col.n), list(published), list(&col.dims)));
        }
        items.push(Item::eq(
            format!("n={} collapse certified", col.n),
            true,
            if col.collapse.certified { "true".to_string() } else { format!("false, obstructions {:?}", col.collapse.obstructions) },
        ));
    }
    Ok(CheckResult::new("table", "2-torsion ranks of pi_* of strict units of F2[u]/u^{n+1}, n <= 8", items))
}

fn mono(v: &[u32]) -> SqMonomial {
    SqMonomial::new(v.to_vec())
}

/// Listed probe classes are nonzero in `ker Sq^{2n+1} / im Sq^{n+1}`.
pub fn probe_check() -> Result<CheckResult, ghm::GhmError> {
    let conv = Convention::Sq0IsZero;
    let mut items = Vec::new();
    let mut notes = Vec::new();
    for &(n, monos) in reference::PROBE_CLASSES {
        let degrees: Vec<u32> = monos.iter().map(|m| m.iter().sum()).collect();
        let lo = *degrees.iter().min().unwrap();
        let hi = *degrees.iter().max().unwrap();
        let rep = homology_probe(n, lo..=hi, conv)?;
        for (m, &d) in monos.iter().zip(&degrees) {
            let x = SteenrodElement::from_admissible(conv, [mono(m)]);
            let nonzero = is_nonzero_class(&x, 2 * n + 1, n + 1, Ambient::Quotient);
            let slice = &rep.untruncated[(d - lo) as usize];
            let trunc = &rep.truncated[(d - lo) as usize];
            notes.push(format!(
                "n={n} {}: class nonzero = {nonzero}; homology in degree {d} has dim {} untruncated, {} inside L(0)_<{}",
                mono(m),
                slice.dim,
                trunc.dim,
                2 * n
            ));
            if monos.len() == 1 {
                items.push(Item::flag(format!("n={n}: {} is a nonzero class", mono(m)), nonzero));
            } else {
                items.push(Item::flag(format!("n={n}: homology nonzero in degree {d}"), slice.dim > 0));
            }
        }
    }
    Ok(CheckResult::new("probe", "nonzero homology classes of ker Sq^{2n+1}/im Sq^{n+1} for n = 6, 10, 14", items).with_notes(notes))
}

/// `Sq^{4i,2i,i}` survives in `ker Sq^{8i-3} / im Sq^{4i-1}`.
pub fn sq4i_check(i_max: u32) -> CheckResult {
    let items = (1..=i_max)
        .map(|i| {
            let x = SteenrodElement::from_admissible(Convention::Sq0IsOne, [mono(&[4 * i, 2 * i, i])]);
            Item::flag(format!("i={i}: Sq[{},{},{}] nonzero in ker Sq^{}/im Sq^{}", 4 * i, 2 * i, i, 8 * i - 3, 4 * i - 1), is_nonzero_class(&x, 8 * i - 3, 4 * i - 1, Ambient::Full))
        })
        .collect();
    CheckResult::new("sq4i", "Sq^{4i,2i,i} is nonzero in the subquotient", items)
        .with_notes(vec!["computed in the whole Steenrod algebra; in A/A.Sq^1 the class dies for i = 1".into()])
}

/// `ker Sq^{8k+1} = im Sq^{4k+1}` on `A/A·Sq^1` in degrees `<= 8k+1`.
pub fn conjecture_check(k_max: u32) -> CheckResult {
    let items = (1..=k_max)
        .map(|k| {
            let r = check_conjecture(k, 8 * k + 1, Convention::Sq0IsOne);
            let bad: Vec<String> = r.slices.iter().filter(|s| s.dim > 0).map(|s| format!("degree {}: {:?}", s.degree, s.representatives)).collect();
            Item::eq(format!("k={k}: nonzero slices in degrees <= {}", 8 * k + 1), "[]", format!("{bad:?}"))
        })
        .collect();
    CheckResult::new("conjecture", "ker Sq^{8k+1} = im Sq^{4k+1} in degrees up to 8k+1", items)
}

/// Four Dyer-Lashof structures, stable across cutoffs.
pub fn classify_check(cutoffs: &[u64]) -> CheckResult {
    let reports: Vec<_> = cutoffs.par_iter().map(|&r| enumerate_structures(r)).collect();
    let mut items = Vec::new();
    for rep in &reports {
        let mut names: Vec<String> = rep.patterns.iter().map(|p| p.unwrap_or("unnamed").to_string()).collect();
        names.sort();
        items.push(Item::eq(format!("cutoff {}: survivors", rep.cutoff), "[\"bllmm\", \"odd\", \"segal\", \"thh\"]", format!("{names:?}")));
        items.push(Item::flag(format!("cutoff {}: survivors satisfy derived relations", rep.cutoff), rep.survivor_constraints.iter().all(Vec::is_empty)));
    }
    CheckResult::new("classify-dl", "exactly four Dyer-Lashof algebra structures on F2[u]", items)
}

/// Binomial parity identities.
pub fn identity_check(n_max: i64, q_max: i64, q_binom: i64) -> CheckResult {
    let mut bad_anq = Vec::new();
    let mut bad_rec = Vec::new();
    for n in 0..=n_max {
        for q in 1..=q_max {
            if !check_identity_anq(n, q) {
                bad_anq.push((n, q));
            }
            if n >= 3 && (b_nq(n, q) != b_nq(n - 1, q + 1) ^ b_nq(n - 3, q + 1) || a_nq(n, q) != a_nq(n - 1, q + 1) ^ a_nq(n - 3, q + 1)) {
                bad_rec.push((n, q));
            }
        }
    }
    let bad_binom: Vec<i64> = (0..=q_binom).filter(|&q| binom_parity(3 * q + 2, 2 * q + 1)).collect();
    CheckResult::new(
        "identity",
        "a_{n,q} = b_{n,q} mod 2, C(3q+2,2q+1) even, and the shared recurrence",
        vec![
            Item::eq(format!("a=b failures for n<={n_max}, q<={q_max}"), "[]", format!("{bad_anq:?}")),
            Item::eq(format!("odd C(3q+2,2q+1) for q<={q_binom}"), "[]", format!("{bad_binom:?}")),
            Item::eq("recurrence failures", "[]", format!("{bad_rec:?}")),
        ],
    )
}

/// Expected homology of the unit complexes, `s = 0..=3`.
fn units_expected(p: u64, variant: Variant) -> Vec<AbGroup> {
    let z = AbGroup::zero(p);
    match (p, variant) {
        (2, Variant::L) => vec![z.clone(), z.clone(), AbGroup { p: 2, free_rank: 0, torsion: vec![1, 1] }, z],
        (2, Variant::M) => vec![z; 4],
        (_, Variant::M) => vec![z.clone(), z.clone(), AbGroup::cyclic(p, 1), z],
        (_, Variant::L) => vec![z; 4],
    }
}

/// Homology of the complexes of units of Burnside rings.
pub fn burnside_check(primes: &[u64], prec: u32, prec2: u32, variants: &[Variant], seed: u64) -> Result<CheckResult, burnside::BurnsideError> {
    let jobs: Vec<(u64, Variant)> = primes.iter().flat_map(|&p| variants.iter().map(move |&v| (p, v))).collect();
    let reports = jobs
        .par_iter()
        .map(|&(p, v)| units_complex_homology(p, if p == 2 { prec2 } else { prec }, v, 3, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let mut items = Vec::new();
    let mut notes = Vec::new();
    for r in &reports {
        let tag = format!("p={} N={} {:?}", r.p, r.precision, r.variant);
        items.push(Item::eq(format!("{tag}: homology s=0..3"), list(&units_expected(r.p, r.variant)), list(&r.homology)));
        items.push(Item::flag(format!("{tag}: d^2 = 0"), r.d_squared_zero));
        items.push(Item::flag(format!("{tag}: unit lattices certified"), r.lattices_certified.iter().all(|&c| c)));
        notes.push(format!("{tag}: groups {}", list(&r.groups)));
        notes.extend(r.notes.iter().map(|n| format!("{tag}: {n}")));
    }
    Ok(CheckResult::new("burnside-check", "homology of [M(s), gl_1 S] and [L(s), gl_1 S] is trivial except Z/p at s = 2", items).with_notes(notes))
}

/// K-theory ranks, transfer images and exactness.
pub fn ktheory_check(primes: &[u64], prec: u32) -> CheckResult {
    let mut items = Vec::new();
    for &p in primes {
        let r = ktheory_complex_check(p, prec);
        items.push(Item::eq(format!("p={p}: ranks K0 M(0..3)"), "(1, 2, 1, 0)", list(&r.ranks[..4])));
        let inv = PadicInt::new(p, prec, p as i64 + 1).inverse().expect("p + 1 is a unit");
        let one = CharElem::chi(p, prec, &[]);
        items.push(Item::flag(format!("p={p}: tr(1) = alpha + beta"), transfer_k(&one).approx_eq(&alpha(p, prec).add(&beta(p, prec)))));
        items.push(Item::flag(format!("p={p}: tr(alpha) = gamma/(p+1)"), transfer_k(&alpha(p, prec)).approx_eq(&gamma(p, prec).scale(inv))));
        items.push(Item::flag(format!("p={p}: tr(beta) = -gamma/(p+1)"), transfer_k(&beta(p, prec)).approx_eq(&gamma(p, prec).scale(-inv))));
        items.push(Item::flag(format!("p={p}: d^2 = 0"), r.composite_zero));
        items.push(Item::eq(format!("p={p}: M homology"), list(&vec![AbGroup::zero(p); r.m_homology.len()]), list(&r.m_homology)));
        items.push(Item::eq(format!("p={p}: L homology"), list(&vec![AbGroup::zero(p); r.l_homology.len()]), list(&r.l_homology)));
    }
    CheckResult::new("ktheory-check", "K0 M(s) has ranks 1, 2, 1, 0 and both K-theory complexes are exact", items)
}

/// Sampled `(p, k, i')` with `i = 2 (p-1) p^k i' - 1`.
pub const J_SAMPLES: [(u64, u32, u64); 5] = [(3, 0, 1), (3, 1, 1), (3, 0, 2), (3, 2, 1), (5, 0, 1)];

/// Adams-operation kernels and the j-theory complexes.
pub fn jtheory_check(primes: &[u64], prec: u32, i_range: std::ops::RangeInclusive<u64>) -> Result<CheckResult, crate::padic::PadicError> {
    let mut items = Vec::new();
    let mut notes = Vec::new();
    for &p in primes {
        let l = default_generator(p);
        for s in 0..=3usize {
            let k = psi_l_kernel(s, p, l, prec)?;
            items.push(Item::eq(format!("p={p} s={s}: rank of ker(psi^{l} - 1)"), (p.pow(s as u32) - 1) / (p - 1), k.rank));
        }
    }
    for &(p, k, ip) in J_SAMPLES.iter().filter(|t| primes.contains(&t.0)) {
        let l = default_generator(p);
        let i = 2 * (p - 1) * p.pow(k) * ip - 1;
        items.push(Item::eq(format!("p={p} k={k} i'={ip} (i={i}): [M(1), Omega^i j]"), AbGroup::cyclic(p, k + 1), j_groups(1, i, p, l, prec)?));
    }
    let jobs: Vec<(u64, u64)> = primes.iter().flat_map(|&p| i_range.clone().map(move |i| (p, i))).collect();
    let reports = jobs
        .par_iter()
        .map(|&(p, i)| j_complex_homology(p, default_generator(p), prec, i, 3))
        .collect::<Result<Vec<_>, _>>()?;
    for r in &reports {
        let mut want = vec![AbGroup::zero(r.p); r.m_homology.len()];
        if r.i == 0 {
            want[2] = AbGroup::cyclic(r.p, 1);
            let lh: Vec<String> = r.l_homology.iter().map(|h| h.as_ref().map_or("?".to_string(), ToString::to_string)).collect();
            notes.push(format!("p={} i=0: L groups {}, L homology {}", r.p, list(&r.l_groups), list(&lh)));
        }
        items.push(Item::eq(format!("p={} i={}: M homology", r.p, r.i), list(&want), list(&r.m_homology)));
        items.push(Item::flag(format!("p={} i={}: d^2 = 0", r.p, r.i), r.d_squared_zero));
        notes.extend(r.notes.iter().map(|n| format!("p={} i={}: {n}", r.p, r.i)));
    }
    Ok(CheckResult::new("jtheory-check", "j-theory of M(s): kernel ranks, [M(1), Omega^i j], Z/p at s = 2 for i = 0, exact for i > 0", items).with_notes(notes))
}

fn random_elem(ring: &BurnsideRing, rng: &mut ChaCha8Rng) -> BurnsideElem {
    let c: Vec<i64> = (0..ring.len()).map(|_| rng.gen_range(-50..50)).collect();
    ring.from_coeffs(&c)
}

/// Randomized and exhaustive property suites.
pub fn selftest(seed: u64, cases: usize) -> CheckResult {
    let mut items = Vec::new();
    // d1^2 = 0 on every chart we build.
    let charts_ok = (1..=8u32).into_par_iter().all(|m| build_complex(&ChartOptions::truncated(m)).is_ok_and(|c| c.check_d1_squared().is_ok()));
    items.push(Item::flag("d1^2 = 0 on truncated charts m = 1..8", charts_ok));
    let post_ok = [2u32, 4, 8].iter().all(|&m| ghm::postnikov_chart(m, -1, Convention::Sq0IsOne).is_ok_and(|c| c.check_d1_squared().is_ok()));
    items.push(Item::flag("d1^2 = 0 on Postnikov charts m = 2, 4, 8", post_ok));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adem_ok = true;
    for _ in 0..cases.min(200) {
        let w: Vec<u32> = (0..rng.gen_range(1..4)).map(|_| rng.gen_range(1..12)).collect();
        let v: Vec<u32> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(1..12)).collect();
        let x = adem_reduce(&w, Convention::Sq0IsOne);
        let y = adem_reduce(&v, Convention::Sq0IsOne);
        let mut wv = w.clone();
        wv.extend(&v);
        let again: SteenrodElement = x.terms().fold(SteenrodElement::zero(Convention::Sq0IsOne), |acc, m| acc.add(&adem_reduce(m.indices(), Convention::Sq0IsOne)).unwrap());
        adem_ok &= again.to_string() == x.to_string();
        adem_ok &= x.mul(&y).unwrap().to_string() == adem_reduce(&wv, Convention::Sq0IsOne).to_string();
        let dl: Vec<u64> = w.iter().map(|&k| k as u64).collect();
        let red = dl_adem_reduce(&dl);
        adem_ok &= red.iter().all(|m| dl_adem_reduce(m.indices()) == std::iter::once(m.clone()).collect());
    }
    items.push(Item::flag("adem_reduce idempotent and associative on random words", adem_ok));
    let bad: Vec<u32> = (1..=64).filter(|&r| !adem_reduce(&[2 * r + 1, r + 1], Convention::Sq0IsZero).is_zero()).collect();
    items.push(Item::eq("Sq^{2r+1} Sq^{r+1} != 0 for r <= 64", "[]", format!("{bad:?}")));

    for (s, p) in [(1usize, 3u64), (1, 5), (2, 3), (2, 5), (3, 3)] {
        items.push(Item::flag(format!("e_{s}^2 = e_{s} in Z/{p}^8 [GL_{s}(F_{p})]"), burnside::steinberg_idempotent_check(s, p, 8)));
    }

    const N: u32 = 10;
    let primes = [2u64, 3, 5];
    let results: Vec<(u64, bool, bool, bool)> = primes
        .par_iter()
        .map(|&p| {
            let rings: Vec<BurnsideRing> = (0..=3).map(|s| BurnsideRing::new(p, s, N)).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 32));
            let (mut inj, mut hom, mut norm) = (true, true, true);
            for _ in 0..cases {
                let r = &rings[rng.gen_range(1..=3)];
                let x = random_elem(r, &mut rng);
                let y = random_elem(r, &mut rng);
                inj &= r.inverse_marks(&r.marks(&x)).is_ok_and(|z| z.approx_eq(&x));
                hom &= r.marks(&r.mul(&x, &y)) == r.marks(&x).mul(&r.marks(&y));
                let s = rng.gen_range(0..if p == 5 { 2 } else { 3 });
                let (r, t) = (&rings[s], &rings[s + 1]);
                let x = burnside::unit_element(r, &mut rng);
                let y = burnside::unit_element(r, &mut rng);
                let lhs = r.norm_ghost(&r.mul(&x, &y), t);
                let rhs = r.norm_ghost(&x, t).mul(&r.norm_ghost(&y, t));
                norm &= lhs.approx_eq(&rhs);
            }
            (p, inj, hom, norm)
        })
        .collect();
    for (p, inj, hom, norm) in results {
        items.push(Item::flag(format!("p={p}: marks injective on {cases} random elements"), inj));
        items.push(Item::flag(format!("p={p}: marks multiplicative on {cases} random pairs"), hom));
        items.push(Item::flag(format!("p={p}: norm multiplicative on {cases} random unit pairs"), norm));
    }

    let mut roots_ok = true;
    for p in [3u64, 5, 7] {
        for _ in 0..cases.min(300) {
            let y = PadicInt::new(p, N, 1 + p as i64 * rng.gen_range(0..1_000_000));
            roots_ok &= y.pow(p + 1).unit_pow(1, p as i64 + 1) == Ok(y);
            roots_ok &= y.unit_pow(2, 1 + p as i64 * 2).and_then(|z| z.unit_pow(1 + p as i64 * 2, 2)) == Ok(y);
        }
    }
    for _ in 0..cases.min(300) {
        let y = PadicInt::new(2, 12, 1 + 4 * rng.gen_range(0..100_000));
        roots_ok &= y.pow(3).unit_pow(1, 3) == Ok(y);
    }
    items.push(Item::flag("unit_pow round trips", roots_ok));

    for p in [3u64, 5] {
        let l = default_generator(p);
        let mut ok = true;
        for _ in 0..20 {
            let g = loop {
                let g = crate::glgroup::FpMat { s: 2, a: (0..4).map(|_| rng.gen_range(0..p)).collect() };
                if g.inverse(p).is_some() {
                    break g;
                }
            };
            let x = CharElem { p, s: 2, coeffs: (0..p * p).map(|_| PadicInt::new(p, N, rng.gen_range(-9..9))).collect() };
            ok &= x.psi(l).act(&g).approx_eq(&x.act(&g).psi(l));
            ok &= reprings::steinberg_add(&reprings::steinberg_add(&x)).approx_eq(&reprings::steinberg_add(&x));
        }
        items.push(Item::flag(format!("p={p}: psi^l commutes with GL_2 and e_2 is idempotent on characters"), ok));
    }
    CheckResult::new("selftest", "property suites", items)
}
