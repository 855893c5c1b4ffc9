use std::collections::{BTreeMap, BTreeSet};

use gmcalc::glgroup::{borel, decode, encode, permutations, FpMat};
use gmcalc::padic::{default_generator, valuation_one_minus_power, PadicError, PadicInt};
use gmcalc::reprings::*;
use gmcalc::zplinalg::{AbGroup, ZpMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: u32 = 10;

fn pa(p: u64, v: i64) -> PadicInt {
    PadicInt::new(p, N, v)
}

/// Multiset `{(-1)^sigma sigma^T b^T v}` keyed by (code, sign), no cancellation.
fn signed_multiset(p: u64, v: &[u64], bt: &[FpMat], perms: &[(FpMat, i64)]) -> BTreeMap<(usize, i64), i64> {
    let mut out = BTreeMap::new();
    for b in bt {
        let w = b.apply(v, p);
        for (sigma, sign) in perms {
            *out.entry((encode(p, &sigma.transpose().apply(&w, p)), *sign)).or_insert(0) += 1;
        }
    }
    out
}

fn raw_steinberg(p: u64, v: &[u64], bt: &[FpMat], perms: &[(FpMat, i64)]) -> CharElem {
    let s = v.len();
    let m = pa(p, gmcalc::glgroup::steinberg_index(p, s) as i64).inverse().unwrap();
    let mut out = CharElem::zero(p, s, N);
    for ((code, sign), c) in signed_multiset(p, v, bt, perms) {
        out.coeffs[code] = out.coeffs[code] + pa(p, sign * c) * m;
    }
    out
}

fn transposed_borel(p: u64, s: usize) -> Vec<FpMat> {
    borel(p, s).iter().map(FpMat::transpose).collect()
}

#[test]
fn stratum_counting_matches_enumeration() {
    for (p, s) in [(3u64, 1usize), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3), (7, 2)] {
        let bt = transposed_borel(p, s);
        let perms = permutations(s);
        let mut rng = ChaCha8Rng::seed_from_u64(p * 10 + s as u64);
        let n = p.pow(s as u32) as usize;
        let mut vs: Vec<usize> = (0..6).map(|_| rng.gen_range(0..n)).collect();
        vs.push(0);
        for c in vs {
            let v = decode(p, s, c);
            assert!(chi_steinberg(p, N, &v).approx_eq(&raw_steinberg(p, &v, &bt, &perms)), "p={p} v={v:?}");
        }
    }
}

#[test]
fn signed_orbit_classes() {
    for (p, s) in [(3u64, 1usize), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3)] {
        let bt = transposed_borel(p, s);
        let perms = permutations(s);
        let mut classes: BTreeMap<Vec<((usize, i64), i64)>, Vec<usize>> = BTreeMap::new();
        for c in 0..p.pow(s as u32) as usize {
            let sig: Vec<((usize, i64), i64)> = signed_multiset(p, &decode(p, s, c), &bt, &perms).into_iter().collect();
            classes.entry(sig).or_default().push(c);
        }
        assert_eq!(classes.len(), s + 1, "p={p} s={s}");
        let reps: BTreeSet<Vec<((usize, i64), i64)>> = class_representatives(s)
            .iter()
            .map(|v| signed_multiset(p, v, &bt, &perms).into_iter().collect())
            .collect();
        assert_eq!(reps.len(), s + 1);
    }
}

#[test]
fn steinberg_examples() {
    for p in [3u64, 5, 7] {
        let inv = |x: i64| pa(p, x).inverse().unwrap();
        assert!(chi_steinberg(p, N, &[0]).approx_eq(&CharElem::chi(p, N, &[0])));
        let avg = (1..p).fold(CharElem::zero(p, 1, N), |a, w| a.add(&CharElem::chi(p, N, &[w]))).scale(inv(p as i64 - 1));
        for v in 1..p {
            assert!(chi_steinberg(p, N, &[v]).approx_eq(&avg));
        }
        let e1 = chi_steinberg(p, N, &[1, 0]);
        assert!(e1.approx_eq(&gamma(p, N).scale(inv(((p + 1) * (p - 1)) as i64))));
        let e2 = chi_steinberg(p, N, &[0, 1]);
        assert!(e2.approx_eq(&e1.scale(pa(p, -(p as i64)))));
        assert!(chi_steinberg(p, N, &[0, 0]).approx_eq(&CharElem::zero(p, 2, N)));
        for c in 0..p.pow(3) as usize {
            assert!(chi_steinberg(p, N, &decode(p, 3, c)).approx_eq(&CharElem::zero(p, 3, N)));
        }
    }
}

#[test]
fn steinberg_idempotent_on_characters() {
    for (p, s) in [(3u64, 1usize), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3)] {
        let mut rng = ChaCha8Rng::seed_from_u64(7 + p + s as u64);
        let n = p.pow(s as u32) as usize;
        let x = CharElem { p, s, coeffs: (0..n).map(|_| pa(p, rng.gen_range(-20..20))).collect() };
        let once = steinberg_add(&x);
        assert!(steinberg_add(&once).approx_eq(&once), "p={p} s={s}");
    }
}

#[test]
fn k_theory_ranks() {
    for p in [3u64, 5] {
        let ranks: Vec<usize> = (0..=4).map(|s| k0_rank(s, p, N).0).collect();
        assert_eq!(ranks, vec![1, 2, 1, 0, 0]);
        // The image in degree two is spanned by gamma.
        let (_, basis) = k0_rank(2, p, N);
        let g = gamma(p, N);
        assert!(coordinates(&basis[0], std::slice::from_ref(&g)).is_some());
        assert!(coordinates(&g, &basis).is_some());
    }
}

#[test]
fn transfer_images() {
    for p in [3u64, 5, 7] {
        let inv = pa(p, p as i64 + 1).inverse().unwrap();
        let one = CharElem::chi(p, N, &[]);
        assert!(transfer_k(&one).approx_eq(&alpha(p, N).add(&beta(p, N))));
        assert!(transfer_k(&alpha(p, N)).approx_eq(&gamma(p, N).scale(inv)));
        assert!(transfer_k(&beta(p, N)).approx_eq(&gamma(p, N).scale(-inv)));
        assert!(transfer_k(&CharElem::zero(p, 1, N)).approx_eq(&CharElem::zero(p, 2, N)));
    }
}

#[test]
fn k_theory_complexes_exact() {
    for p in [3u64, 5] {
        let r = ktheory_complex_check(p, N);
        let inv = pa(p, p as i64 + 1).inverse().unwrap();
        assert_eq!(r.d0, vec![pa(p, 1), pa(p, 1)]);
        assert!((r.d1[0] - inv).is_zero() && (r.d1[1] + inv).is_zero());
        assert!(r.composite_zero && r.generators_span_image && r.exact());
        assert_eq!(r.l_groups, vec![AbGroup::free(p, 1), AbGroup::free(p, 1)]);
    }
}

#[test]
fn adams_kernel_rank() {
    for p in [3u64, 5] {
        let l = default_generator(p);
        for s in 0..=3usize {
            let k = psi_l_kernel(s, p, l, N).unwrap();
            let want = (p.pow(s as u32) - 1) / (p - 1);
            assert_eq!(k.rank as u64, want, "p={p} s={s}");
            assert_eq!(k.basis.len() as u64, want);
            for x in &k.basis {
                assert!(x.psi(l).approx_eq(x));
                assert!(x.rank().is_zero());
            }
        }
    }
    assert!(matches!(psi_l_kernel(1, 3, 4, N), Err(PadicError::NotAGenerator { .. })));
}

#[test]
fn adams_operations_commute_with_gl() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [3u64, 5] {
        let l = default_generator(p);
        for _ in 0..20 {
            let g = loop {
                let g = FpMat { s: 2, a: (0..4).map(|_| rng.gen_range(0..p)).collect() };
                if g.inverse(p).is_some() {
                    break g;
                }
            };
            let x = CharElem { p, s: 2, coeffs: (0..p * p).map(|_| pa(p, rng.gen_range(-9..9))).collect() };
            assert!(x.psi(l).act(&g).approx_eq(&x.act(&g).psi(l)));
        }
    }
}

#[test]
fn j_groups_in_degree_zero() {
    for p in [3u64, 5] {
        let l = default_generator(p);
        assert!(j_groups(0, 0, p, l, N).unwrap().is_zero());
        assert_eq!(j_groups(1, 0, p, l, N).unwrap(), AbGroup::free(p, 1));
        assert_eq!(j_groups(2, 0, p, l, N).unwrap(), AbGroup::free(p, 1));
        assert!(j_groups(3, 0, p, l, N).unwrap().is_zero());
    }
}

/// `Z_p / (1 - l^m)`, from the closed-form valuation.
fn cyc_one_minus(p: u64, l: u64, m: u64) -> Vec<u32> {
    let v = valuation_one_minus_power(p, l, m).unwrap();
    if v == 0 {
        vec![]
    } else {
        vec![v]
    }
}

/// In odd loop degree `2m - 1` the `e_s` summands are spanned by
/// psi-fixed classes (`alpha, beta`; `gamma`), on which `psi^l / l^m - 1` is
/// multiplication by `l^{-m} - 1`.
#[test]
fn j_groups_in_odd_degrees() {
    let samples: &[(u64, u32, u64)] = &[(3, 0, 1), (3, 1, 1), (3, 0, 2), (3, 2, 1), (5, 0, 1), (5, 1, 1)];
    for &(p, k, ip) in samples {
        let l = default_generator(p);
        let m = (p - 1) * p.pow(k) * ip;
        let i = 2 * m - 1;
        let c = cyc_one_minus(p, l, m);
        assert_eq!(c, vec![k + 1]);
        let m1 = j_groups(1, i, p, l, N).unwrap();
        assert_eq!(m1, AbGroup { p, free_rank: 0, torsion: vec![k + 1, k + 1] }, "p={p} i={i}");
        assert_eq!(j_groups(0, i, p, l, N).unwrap(), AbGroup::cyclic(p, k + 1));
        assert_eq!(j_groups(2, i, p, l, N).unwrap(), AbGroup::cyclic(p, k + 1));
        assert!(j_groups(3, i, p, l, N).unwrap().is_zero());
    }
    // Off the congruence every summand vanishes.
    for p in [3u64, 5] {
        let l = default_generator(p);
        for m in 1..=12u64 {
            let zero = m % (p - 1) != 0;
            for s in 0..=2 {
                assert_eq!(j_groups(s, 2 * m - 1, p, l, N).unwrap().is_zero(), zero || s == 3, "p={p} m={m} s={s}");
                assert!(j_groups(s, 2 * m, p, l, N).unwrap().is_zero());
            }
        }
    }
}

/// Eigenvalues of `psi^l` on a line block are the `(p-1)`-th roots of unity,
/// so each block contributes `Z/p^{v(m)+1}`; the trivial character adds
/// `Z_p/(1 - l^m)`.
#[test]
fn classifying_space_groups() {
    for p in [3u64, 5] {
        let l = default_generator(p);
        for s in 0..=2usize {
            let lines = (p.pow(s as u32) - 1) / (p - 1);
            assert_eq!(bv_j_group(s, 0, p, l, N).unwrap(), AbGroup::free(p, lines as usize));
            for m in 1..=10u64 {
                let mut t = cyc_one_minus(p, l, m);
                let vm = gmcalc::padic::vp(p, m).unwrap() + 1;
                t.extend(std::iter::repeat_n(vm, lines as usize));
                t.sort_unstable();
                assert_eq!(bv_j_group(s, 2 * m - 1, p, l, N).unwrap(), AbGroup { p, free_rank: 0, torsion: t }, "p={p} s={s} m={m}");
            }
        }
    }
}

#[test]
fn determinant_factors() {
    for p in [3u64, 5, 7] {
        let l = default_generator(p);
        for i in 1..=100u64 {
            assert!(determinant_factor(p, l, i, N).is_unit());
            // The (p-1)x(p-1) block itself: -1 on the diagonal, l^{-i} on the
            // superdiagonal and in the corner.
            let x = pa(p, l as i64).pow(i).inverse().unwrap();
            let n = (p - 1) as usize;
            let block = ZpMatrix::from_fn(p, N, n, n, |r, c| {
                if r == c {
                    pa(p, -1)
                } else if c == (r + 1) % n {
                    x
                } else {
                    pa(p, 0)
                }
            });
            let v: u32 = block.smith_valuations().iter().sum();
            let want = gmcalc::padic::vp(p, i).unwrap() + 1;
            assert_eq!(v, want.min(N), "p={p} i={i}");
        }
    }
}

#[test]
fn j_complexes() {
    for p in [3u64, 5, 7] {
        let l = default_generator(p);
        let r = j_complex_homology(p, l, N, 0, 3).unwrap();
        assert!(r.d_squared_zero);
        assert_eq!(r.m_homology, vec![AbGroup::zero(p), AbGroup::zero(p), AbGroup::cyclic(p, 1), AbGroup::zero(p)]);
        assert_eq!(r.l_groups, vec![AbGroup::zero(p), AbGroup::free(p, 1), AbGroup::zero(p), AbGroup::zero(p)]);
        assert_eq!(r.l_homology[1], Some(AbGroup::free(p, 1)));
    }
    for p in [3u64, 5] {
        let l = default_generator(p);
        let top = if p == 3 { 50 } else { 20 };
        for i in 1..=top {
            let r = j_complex_homology(p, l, N, i, 3).unwrap();
            assert!(r.d_squared_zero);
            assert!(r.m_homology.iter().all(AbGroup::is_zero), "p={p} i={i}");
            assert!(r.l_homology.iter().all(|h| h.as_ref().is_some_and(AbGroup::is_zero)), "p={p} i={i}");
        }
    }
}
