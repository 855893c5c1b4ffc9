use gmcalc::burnside::*;
use gmcalc::glgroup::{decode, encode, FpMat, Subspace};
use gmcalc::padic::PadicInt;
use gmcalc::zplinalg::AbGroup;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: u32 = 12;
const CASES: usize = 1000;

fn random_gl(p: u64, s: usize, rng: &mut ChaCha8Rng) -> FpMat {
    loop {
        let g = FpMat { s, a: (0..s * s).map(|_| rng.gen_range(0..p)).collect() };
        if g.inverse(p).is_some() {
            return g;
        }
    }
}

fn random_elem(ring: &BurnsideRing, rng: &mut ChaCha8Rng) -> BurnsideElem {
    let c: Vec<i64> = (0..ring.len()).map(|_| rng.gen_range(-50..50)).collect();
    ring.from_coeffs(&c)
}

fn close(a: PadicInt, b: PadicInt) -> bool {
    (a - b).is_zero()
}

fn pa(p: u64, v: i64) -> PadicInt {
    PadicInt::new(p, N, v)
}

#[test]
fn two_dimensional_mark_table() {
    for p in [2u64, 3, 5] {
        let r = BurnsideRing::new(p, 2, N);
        assert_eq!(r.len() as u64, p + 3);
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let x = random_elem(&r, &mut rng);
        let phi = r.marks(&x);
        let a = x.coeffs[0];
        let y = x.coeffs[r.len() - 1];
        let lines = r.lines();
        assert_eq!(phi.values[0], a);
        let mut sum_b = pa(p, 0);
        for &l in &lines {
            assert_eq!(phi.values[l], a + pa(p, p as i64) * x.coeffs[l]);
            sum_b = sum_b + x.coeffs[l];
        }
        assert_eq!(phi.values[r.len() - 1], a + pa(p, p as i64) * sum_b + pa(p, (p * p) as i64) * y);
        // Explicit inversion of the table.
        for &l in &lines {
            assert!(close(x.coeffs[l], (phi.values[l] - phi.values[0]).div_p_pow(1).unwrap()));
        }
    }
}

#[test]
fn small_mark_examples() {
    let r = BurnsideRing::new(3, 1, N);
    assert!(r.marks(&r.one()).values.iter().all(|v| *v == pa(3, 1)));
    let x = r.from_coeffs(&[0, 7]);
    assert_eq!(r.marks(&x).values, vec![pa(3, 0), pa(3, 21)]);
    let g = GhostVector { values: vec![pa(3, 0), pa(3, 3)] };
    assert!(r.inverse_marks(&g).unwrap().approx_eq(&r.basis(1)));
    let ones = GhostVector { values: vec![pa(3, 1); 2] };
    assert!(r.inverse_marks(&ones).unwrap().approx_eq(&r.one()));
    let bad = GhostVector { values: vec![pa(3, 1), pa(3, 2)] };
    assert!(matches!(r.inverse_marks(&bad), Err(BurnsideError::NotInImage(_))));
}

#[test]
fn subspace_counts() {
    // Gaussian binomials: F_3^3 has 13 lines and 13 planes.
    let r = BurnsideRing::new(3, 3, N);
    assert_eq!(r.lines().len(), 13);
    assert_eq!((0..r.len()).filter(|&i| r.lattice.dim(i) == 2).count(), 13);
    assert_eq!(BurnsideRing::new(5, 3, N).len(), 64);
}

#[test]
fn marks_injective_and_multiplicative() {
    for p in [2u64, 3, 5] {
        let rings: Vec<BurnsideRing> = (1..=3).map(|s| BurnsideRing::new(p, s, N)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(100 + p);
        for _ in 0..CASES {
            let r = &rings[rng.gen_range(0..3)];
            let x = random_elem(r, &mut rng);
            let y = random_elem(r, &mut rng);
            assert!(r.inverse_marks(&r.marks(&x)).unwrap().approx_eq(&x));
            assert_eq!(r.marks(&r.mul(&x, &y)), r.marks(&x).mul(&r.marks(&y)));
        }
    }
}

#[test]
fn marks_equivariant() {
    for p in [2u64, 3, 5] {
        let rings: Vec<BurnsideRing> = (1..=3).map(|s| BurnsideRing::new(p, s, N)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(200 + p);
        for _ in 0..CASES / 4 {
            let r = &rings[rng.gen_range(0..3)];
            let x = random_elem(r, &mut rng);
            let g = random_gl(p, r.s, &mut rng);
            let h = random_gl(p, r.s, &mut rng);
            assert_eq!(r.marks(&r.act(&x, &g)), r.ghost_act(&r.marks(&x), &g));
            // A right action.
            assert!(r.act(&r.act(&x, &g), &h).approx_eq(&r.act(&x, &g.mul(&h, p))));
        }
    }
}

/// Canonical representative of `v + W`: the coset element with the least code.
fn coset_rep(p: u64, w: &Subspace, v: &[u64]) -> usize {
    w.elements(p)
        .iter()
        .map(|u| encode(p, &v.iter().zip(u).map(|(a, b)| (a + b) % p).collect::<Vec<_>>()))
        .min()
        .unwrap()
}

/// `|Map_H(G, X)^W|` for `H = V_s` in the first coordinates of `G = V_{s+1}`,
/// by enumerating all `H`-equivariant functions.
fn coinduced_marks(ring: &BurnsideRing, target: &BurnsideRing, counts: &[usize]) -> Vec<u64> {
    let (p, s) = (ring.p, ring.s);
    // X as a list of (orbit W, coset code); H acts by translation.
    let mut points: Vec<(usize, usize)> = Vec::new();
    let mut orbit_of: Vec<usize> = Vec::new();
    for (o, &c) in counts.iter().enumerate() {
        let w = &ring.lattice.subspaces[o];
        let mut reps: Vec<usize> = (0..p.pow(s as u32) as usize).map(|v| coset_rep(p, w, &decode(p, s, v))).collect();
        reps.sort_unstable();
        reps.dedup();
        for k in 0..c {
            for &r in &reps {
                points.push((o, r));
                orbit_of.push(k);
            }
        }
    }
    let act = |h: &[u64], i: usize| -> usize {
        let (o, r) = points[i];
        let v: Vec<u64> = decode(p, s, r).iter().zip(h).map(|(a, b)| (a + b) % p).collect();
        let rep = coset_rep(p, &ring.lattice.subspaces[o], &v);
        (0..points.len()).find(|&j| points[j] == (o, rep) && orbit_of[j] == orbit_of[i]).unwrap()
    };
    let n = points.len();
    let g_elems: Vec<Vec<u64>> = (0..p.pow(s as u32 + 1) as usize).map(|c| decode(p, s + 1, c)).collect();
    // f(h + t e_{s+1}) = h . x_t.
    let eval = |f: &[usize], g: &[u64]| -> usize { act(&g[..s], f[g[s] as usize]) };
    let mut out = vec![0u64; target.len()];
    let total = n.pow(p as u32);
    for code in 0..total {
        let mut f = Vec::with_capacity(p as usize);
        let mut c = code;
        for _ in 0..p {
            f.push(c % n);
            c /= n;
        }
        let values: Vec<usize> = g_elems.iter().map(|g| eval(&f, g)).collect();
        for (wi, w) in target.lattice.subspaces.iter().enumerate() {
            let fixed = w.rows.iter().all(|wv| {
                g_elems.iter().enumerate().all(|(gi, g)| {
                    let moved: Vec<u64> = g.iter().zip(wv).map(|(a, b)| (a + b) % p).collect();
                    values[encode(p, &moved)] == values[gi]
                })
            });
            if fixed {
                out[wi] += 1;
            }
        }
    }
    out
}

#[test]
fn norm_matches_coinduction() {
    for (p, s, counts) in [
        (2u64, 0usize, vec![3usize]),
        (3, 0, vec![2]),
        (2, 1, vec![1, 1]),
        (2, 1, vec![2, 1]),
        (3, 1, vec![1, 1]),
        (3, 1, vec![2, 0]),
        (2, 2, vec![1, 0, 1, 0, 0]),
    ] {
        let r = BurnsideRing::new(p, s, N);
        let t = BurnsideRing::new(p, s + 1, N);
        let x = r.from_coeffs(&counts.iter().map(|&c| c as i64).collect::<Vec<_>>());
        let want: Vec<PadicInt> = coinduced_marks(&r, &t, &counts).into_iter().map(|v| pa(p, v as i64)).collect();
        assert_eq!(r.norm_ghost(&x, &t).values, want, "p={p} s={s} {counts:?}");
    }
}

#[test]
fn norm_closed_forms() {
    for p in [2u64, 3, 5, 7] {
        let r0 = BurnsideRing::new(p, 0, N);
        let r1 = BurnsideRing::new(p, 1, N);
        let r2 = BurnsideRing::new(p, 2, N);
        let pp = pa(p, p as i64);
        for a in [1i64, 1 + p as i64, 1 - 2 * p as i64] {
            let na = r0.norm(&r0.from_coeffs(&[a]), &r1).unwrap();
            let av = pa(p, a);
            assert!(na.approx_eq(&BurnsideElem { s: 1, coeffs: vec![av, (av.pow(p) - av).div_p_pow(1).unwrap()] }));
            for b in [0i64, 1, -3, 5] {
                let x = r1.from_coeffs(&[a, b]);
                let bv = pa(p, b);
                let phi = r1.norm_ghost(&x, &r2);
                let f1 = r2.f1();
                assert_eq!(phi.values[0], av);
                assert_eq!(phi.values[r2.len() - 1], (av + pp * bv).pow(p));
                for l in r2.lines() {
                    assert_eq!(phi.values[l], if l == f1 { av.pow(p) } else { av + pp * bv });
                }
                let n = r1.norm(&x, &r2).unwrap();
                assert!(close(n.coeffs[0], av));
                assert!(close(n.coeffs[f1], (av.pow(p) - av).div_p_pow(1).unwrap()));
                for l in r2.lines().into_iter().filter(|&l| l != f1) {
                    assert!(close(n.coeffs[l], bv));
                }
                let y = ((av + pp * bv).pow(p) - av.pow(p) - pp * pp * bv).div_p_pow(2).unwrap();
                assert!(close(n.coeffs[r2.len() - 1], y));
            }
        }
        assert!(r1.norm(&r1.one(), &r2).unwrap().approx_eq(&r2.one()));
    }
}

#[test]
fn norm_multiplicative_on_units() {
    for p in [2u64, 3, 5] {
        let rings: Vec<BurnsideRing> = (0..=3).map(|s| BurnsideRing::new(p, s, N)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(300 + p);
        for _ in 0..CASES {
            let s = rng.gen_range(0..if p == 5 { 2 } else { 3 });
            let (r, t) = (&rings[s], &rings[s + 1]);
            let x = unit_element(r, &mut rng);
            let y = unit_element(r, &mut rng);
            let lhs = r.norm(&r.mul(&x, &y), t).unwrap();
            let rhs = t.mul(&r.norm(&x, t).unwrap(), &r.norm(&y, t).unwrap());
            assert!(lhs.approx_eq(&rhs), "p={p} s={s}");
        }
    }
}

#[test]
fn steinberg_on_two_dimensional_units() {
    for p in [2u64, 3, 5, 7] {
        let r = BurnsideRing::new(p, 2, N);
        let mut rng = ChaCha8Rng::seed_from_u64(400 + p);
        let (f1, sf1) = (r.f1(), r.sigma_f1());
        for _ in 0..20 {
            let x = unit_element(&r, &mut rng);
            let xe = r.steinberg_mult(&x).unwrap();
            let phi = r.marks(&xe);
            let one = pa(p, 1);
            assert!(close(phi.values[0], one));
            assert!(close(phi.values[r.len() - 1], one));
            for l in r.lines().into_iter().filter(|&l| l != f1 && l != sf1) {
                assert!((phi.values[l] - one).is_zero());
            }
            let t = r.t_invariant(&x).unwrap();
            assert!((phi.values[f1] - t).is_zero());
            assert!(xe.approx_eq(&r.e2_closed_form(t).unwrap()));
            assert!(r.steinberg_mult(&xe).unwrap().approx_eq(&xe));
        }
    }
}

#[test]
fn steinberg_kills_three_dimensional_units() {
    for p in [2u64, 3] {
        let r = BurnsideRing::new(p, 3, N);
        let mut rng = ChaCha8Rng::seed_from_u64(500 + p);
        for _ in 0..3 {
            let x = unit_element(&r, &mut rng);
            assert!(r.steinberg_mult(&x).unwrap().approx_eq(&r.one()));
        }
    }
}

#[test]
fn steinberg_log_matrix_matches_products() {
    for (p, s) in [(2u64, 1usize), (2, 2), (3, 2), (5, 2), (2, 3), (3, 3)] {
        let r = BurnsideRing::new(p, s, N);
        let e = r.on_coords(&r.steinberg_log_matrix());
        let mut rng = ChaCha8Rng::seed_from_u64(600 + p + s as u64);
        for _ in 0..3 {
            let x = unit_element(&r, &mut rng);
            let before = r.unit_coords(&r.marks(&x)).unwrap();
            let after = r.unit_coords(&r.marks(&r.steinberg_mult(&x).unwrap())).unwrap();
            let want = e.mul_vec(&before);
            let n = r.len();
            // inverse_marks spends up to s digits.
            let q = p.pow(N - s as u32 - 1);
            for i in 0..after.len() {
                if p == 2 && i < n {
                    assert_eq!(after[i] % 2, want[i] % 2, "sign p={p} s={s}");
                } else {
                    assert_eq!(after[i] % q, want[i] % q, "log p={p} s={s}");
                }
            }
        }
    }
}

#[test]
fn idempotent_in_group_ring() {
    for (s, p) in [(1usize, 3u64), (1, 5), (2, 3), (2, 5), (3, 3)] {
        assert!(steinberg_idempotent_check(s, p, 8), "s={s} p={p}");
    }
}

#[test]
fn unit_lattices_certified() {
    for p in [2u64, 3, 5] {
        for s in 0..=2 {
            let r = BurnsideRing::new(p, s, 30.min(gmcalc::padic::word_precision(p)));
            assert!(r.unit_lattice(1).unwrap().certified, "p={p} s={s}");
        }
    }
}

#[test]
fn middle_transfer_formula() {
    for p in [3u64, 5, 7] {
        let r1 = BurnsideRing::new(p, 1, N);
        let r2 = BurnsideRing::new(p, 2, N);
        for (a, b) in [(1 + p as i64, 2i64), (1, 1), (1 - p as i64, -4)] {
            let x = r1.from_coeffs(&[a, b]);
            let t = r2.t_invariant(&r1.norm(&x, &r2).unwrap()).unwrap();
            let (av, bv) = (pa(p, a), pa(p, b));
            let base = av.pow(p) * (av + pa(p, p as i64) * bv).inverse().unwrap();
            let want = base.unit_pow(p as i64, p as i64 + 1).unwrap();
            assert!((t - want).is_zero());
        }
    }
}

fn cyc(p: u64, k: u32) -> AbGroup {
    AbGroup::cyclic(p, k)
}

#[test]
fn odd_unit_complexes() {
    for p in [3u64, 5, 7] {
        let m = units_complex_homology(p, 10, Variant::M, 3, 1).unwrap();
        assert!(m.d_squared_zero && m.lattices_certified.iter().all(|&c| c));
        assert_eq!(m.groups, vec![AbGroup::free(p, 1), AbGroup::free(p, 2), AbGroup::free(p, 1), AbGroup::zero(p)]);
        assert_eq!(m.homology, vec![AbGroup::zero(p), AbGroup::zero(p), cyc(p, 1), AbGroup::zero(p)]);
        let l = units_complex_homology(p, 10, Variant::L, 3, 1).unwrap();
        assert_eq!(l.groups, vec![AbGroup::free(p, 1), AbGroup::free(p, 1), AbGroup::zero(p), AbGroup::zero(p)]);
        assert!(l.homology.iter().all(AbGroup::is_zero));
        assert!(l.notes.is_empty());
    }
}

/// At `p = 2` the middle map is `(u, v) -> (u^2 / v)^{2/3}` in ghost
/// coordinates `u = phi(V_1)`, `v = phi(0)`: its kernel `v = +-u^2` is larger
/// than the image `v = u^2` of the first map, and its image is the squares
/// `1 + 8 Z_2` inside `t in Z_2^x`.
#[test]
fn two_primary_unit_complexes() {
    let r1 = BurnsideRing::new(2, 1, N);
    let r2 = BurnsideRing::new(2, 2, N);
    // u = 1, v = -1, i.e. a = 1, b = -1: in the kernel, not in the image.
    let w = r1.from_coeffs(&[1, -1]);
    let t = r2.t_invariant(&r1.norm(&w, &r2).unwrap()).unwrap();
    assert!((t.pow(2) - pa(2, 1)).is_zero());
    assert!(r2.steinberg_mult(&r1.norm(&w, &r2).unwrap()).unwrap().approx_eq(&r2.one()));
    let (l, m) = p2_units_complex(8, 3, 1).unwrap();
    let z2 = || cyc(2, 1);
    assert_eq!(m.groups[0], AbGroup { p: 2, free_rank: 1, torsion: vec![1] });
    assert_eq!(m.homology, vec![AbGroup::zero(2), z2(), AbGroup { p: 2, free_rank: 0, torsion: vec![1, 1] }, AbGroup::zero(2)]);
    assert!(l.homology.iter().all(AbGroup::is_zero));
}

#[test]
fn precision_limit_reported() {
    assert!(matches!(units_complex_homology(7, 40, Variant::M, 2, 1), Err(BurnsideError::Precision { .. })));
}
