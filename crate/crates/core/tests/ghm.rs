use gmcalc::f2core::F2Matrix;
use gmcalc::ghm::*;
use gmcalc::reference;
use gmcalc::steenrod::{adem_reduce, basis, left_mult_matrix, Convention, SqMonomial, SteenrodElement};

fn mono(v: &[u32]) -> SqMonomial {
    SqMonomial::new(v.to_vec())
}

fn chart5() -> CoKoszulComplex {
    build_complex(&ChartOptions::truncated(5).window((-1, 10), (0, 2))).unwrap()
}

fn find(c: &CoKoszulComplex, n: u32, m: &[u32]) -> usize {
    c.classes.iter().position(|x| x.n == n && x.monomial == mono(m)).unwrap()
}

#[test]
fn spot_classes_m5() {
    let c = chart5();
    for (n, m, stem, filt) in [
        (1, &[][..], 2, 0),
        (1, &[2][..], 0, 1),
        (5, &[10][..], 0, 1),
        (4, &[6, 2][..], 0, 2),
        (5, &[8, 3][..], -1, 2),
    ] {
        let x = &c.classes[find(&c, n, m)];
        assert_eq!((x.stem, x.filtration), (stem, filt), "{x}");
        assert!(c.in_window(x));
    }
}

#[test]
fn d1_examples() {
    let c = chart5();
    let u = find(&c, 1, &[]);
    assert_eq!(c.d1_text(u), "u^2.Sq[3]");
    let u2sq4 = find(&c, 2, &[4]);
    assert_eq!(c.d1_text(u2sq4), "u^4.Sq[7,2]");
    // Oracle: Sq^5 Sq^4 reduces to Sq^{7,2}.
    assert_eq!(adem_reduce(&[5, 4], Convention::Sq0IsZero).to_string(), "Sq[7,2]");
    // u^3 is past the truncation for d1.
    assert_eq!(c.d1_text(find(&c, 3, &[])), "0");
}

#[test]
fn e2_at_2_0_vanishes() {
    let c = chart5();
    assert_eq!(e2_at(&c, 2, 0).unwrap().dim, 0);
}

#[test]
fn window_too_small_is_reported() {
    let c = chart5();
    assert!(matches!(e2_at(&c, 20, 0), Err(GhmError::WindowTooSmall { .. })));
}

#[test]
fn chart_m5_against_published_lists() {
    let c = chart5();
    let diff = reference::compare_chart(&c, reference::CHART_M5_CLASSES, reference::CHART_M5_ARROWS);
    // Every arrow of the picture is present at bidegree level.
    assert!(diff.missing_arrows.is_empty(), "{diff:?}");
    assert!(diff.extra_arrows.is_empty(), "{diff:?}");
    // The picture draws u^n Sq^{2n+1}, which has |I| = 2n and falls outside L(0)_{<2n}.
    let expected_missing: Vec<String> = (1..=5).map(|n| format!("u^{n}.Sq[{}]", 2 * n + 1)).collect();
    let mut got = diff.missing_classes.clone();
    got.sort();
    let mut want = expected_missing.clone();
    want.sort();
    assert_eq!(got, want);
    // Two length-two classes of u^3 are in L(0)_{<6} but not drawn.
    let mut extra = diff.extra_classes.clone();
    extra.sort();
    assert_eq!(extra, vec!["u^3.Sq[4,2]".to_string(), "u^3.Sq[5,2]".to_string()]);
}

#[test]
fn chart_m5_slack_one() {
    let c = build_complex(&ChartOptions::truncated(5).window((-1, 10), (0, 2)).slack(1)).unwrap();
    let diff = reference::compare_chart(&c, reference::CHART_M5_CLASSES, reference::CHART_M5_ARROWS);
    assert!(diff.missing_classes.is_empty(), "{diff:?}");
    let mut extra = diff.extra_classes.clone();
    extra.sort();
    assert_eq!(extra, vec!["u^3.Sq[4,2]".to_string(), "u^3.Sq[5,2]".to_string()]);
    assert!(diff.missing_arrows.is_empty() && diff.extra_arrows.is_empty(), "{diff:?}");
}

#[test]
fn d1_squared_vanishes() {
    for m in 1..=8 {
        let c = build_complex(&ChartOptions::truncated(m)).unwrap();
        c.check_d1_squared().unwrap();
    }
    let c = build_complex(&ChartOptions {
        truncation: Truncation::Unbounded { n_max: 6 },
        ..ChartOptions::truncated(6).window((-2, 12), (0, 4))
    })
    .unwrap();
    assert!(c.check_d1_squared().unwrap() > 0);
    for m in [2, 4, 8, 16] {
        postnikov_chart(m, -1, Convention::Sq0IsOne).unwrap().check_d1_squared().unwrap();
    }
}

#[test]
fn bidegree_bookkeeping() {
    let c = build_complex(&ChartOptions::truncated(6)).unwrap();
    for x in &c.classes {
        assert_eq!(x.stem, 2 * x.n as i32 - x.monomial.degree() as i32);
        assert_eq!(x.filtration, x.monomial.len() as u32);
        assert!(x.monomial.in_l0());
        assert!(x.monomial.reduced_degree() < 2 * x.n);
    }
}

#[test]
fn splitting_examples() {
    let c = chart5();
    let comps = splitting_components(&c).unwrap();
    let ns = |k: u32| {
        let mut v: Vec<u32> = comps[&k].iter().map(|x| x.n).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    assert_eq!(ns(1), vec![1, 2, 4]);
    assert_eq!(ns(3), vec![3]);
    assert_eq!(ns(5), vec![5]);
    let c8 = build_complex(&ChartOptions::truncated(8)).unwrap();
    let comps8 = splitting_components(&c8).unwrap();
    assert!(comps8[&3].iter().any(|x| x.n == 6));
}

#[test]
fn component_sums_match_whole_page() {
    for m in [5, 7] {
        let c = build_complex(&ChartOptions::truncated(m)).unwrap();
        let whole = e2_page(&c).unwrap();
        let comps = splitting_components(&c).unwrap();
        let mut summed = vec![0usize; whole.len()];
        for &k in comps.keys() {
            let part = e2_page_filtered(&c, &move |x: &ChartClass| x.odd_core() == k).unwrap();
            for (s, e) in summed.iter_mut().zip(&part) {
                *s += e.dim;
            }
        }
        let whole_dims: Vec<usize> = whole.iter().map(|e| e.dim).collect();
        assert_eq!(whole_dims, summed, "m={m}");
    }
}

/// `dim ker Sq^{2n+1} / im Sq^{n+1}` on `L(0)_{<2n}` in degree `d`, from ranks
/// of restricted multiplication matrices.
fn rank_oracle(n: u32, d: u32, conv: Convention) -> usize {
    let restrict = |deg: u32, bound: u32| -> Vec<usize> {
        let b = basis(deg, true);
        (0..b.len()).filter(|&i| b.monomials[i].reduced_degree() < bound).collect()
    };
    let cols_of = |m: &F2Matrix, cols: &[usize]| {
        F2Matrix::from_columns(m.rows(), &cols.iter().map(|&j| m.column(j)).collect::<Vec<_>>())
    };
    let here = restrict(d, 2 * n);
    let out = cols_of(&left_mult_matrix(2 * n + 1, d, true, conv), &here);
    let out_rank = if here.is_empty() { 0 } else { out.rank() };
    let in_rank = if n.is_multiple_of(2) && d > n {
        let src = restrict(d - n - 1, n);
        let full = left_mult_matrix(n + 1, d - n - 1, true, conv);
        let rows: Vec<_> = here.clone();
        let m = F2Matrix::from_columns(
            rows.len(),
            &src.iter()
                .map(|&j| {
                    let col = full.column(j);
                    gmcalc::f2core::F2Vec::from_indices(rows.len(), rows.iter().enumerate().filter(|(_, &r)| col.get(r)).map(|(k, _)| k))
                })
                .collect::<Vec<_>>(),
        );
        if src.is_empty() { 0 } else { m.rank() }
    } else {
        0
    };
    here.len() - out_rank - in_rank
}

#[test]
fn unbounded_e2_matches_rank_oracle() {
    for conv in [Convention::Sq0IsZero, Convention::Sq0IsOne] {
        for n in 1..=8u32 {
            let degrees = 0..=(3 * n);
            let rep = homology_probe_any(n, degrees.clone(), conv);
            for (d, dim) in degrees.zip(rep) {
                assert_eq!(dim, rank_oracle(n, d, conv), "n={n} d={d} {conv:?}");
            }
        }
    }
}

/// E2 dims at `u^n` of the unbounded complex, by Steenrod degree.
fn homology_probe_any(n: u32, degrees: std::ops::RangeInclusive<u32>, conv: Convention) -> Vec<usize> {
    degrees
        .map(|d| {
            let stem = 2 * n as i32 - d as i32;
            let opts = ChartOptions {
                truncation: Truncation::Unbounded { n_max: n },
                ..ChartOptions::truncated(n).window((stem, stem), (0, 6)).convention(conv)
            };
            let c = build_complex(&opts).unwrap();
            e2_page_filtered(&c, &|x: &ChartClass| x.n == n).unwrap().iter().map(|e| e.dim).sum()
        })
        .collect()
}

#[test]
fn filtration_one_of_unbounded_complex() {
    let opts = ChartOptions {
        truncation: Truncation::Unbounded { n_max: 12 },
        ..ChartOptions::truncated(12).window((-4, 24), (1, 1))
    };
    let c = build_complex(&opts).unwrap();
    let page = e2_page_filtered(&c, &|x: &ChartClass| x.n <= 12).unwrap();
    let mut reps: Vec<String> = page.iter().flat_map(|e| e.representatives.clone()).collect();
    reps.sort();
    let mut want: Vec<String> = (1..=12).filter(|n| n % 2 == 1).map(|n| format!("u^{n}.Sq[{}]", n + 1)).collect();
    want.sort();
    assert_eq!(reps, want);
}

#[test]
fn table_columns() {
    let opts = ChartOptions::truncated(1);
    let t = homotopy_table(8, &opts).unwrap();
    assert_eq!(t[0].dims, vec![1, 0, 1]);
    assert_eq!(t[4].dims, vec![8, 5, 5, 3, 4, 2, 3, 1, 2, 0, 1]);
    assert_eq!(t[7].dims[15..], [0, 1]);
    for col in &t {
        let published = reference::TABLE[col.n as usize - 1];
        // Positive stems agree with the published column everywhere.
        assert_eq!(col.dims[1..], published[1..], "n={}", col.n);
    }
    // Frozen from this implementation: pi_0 is one larger than published for these n.
    let excess: Vec<u32> =
        t.iter().filter(|c| c.dims[0] != reference::TABLE[c.n as usize - 1][0]).map(|c| c.n).collect();
    assert_eq!(excess, vec![2, 3, 6, 7, 8]);
    assert!(t[..6].iter().all(|c| c.collapse.certified));
    assert!(!t[6].collapse.certified && !t[7].collapse.certified);
}

#[test]
fn table_independent_of_convention() {
    let a = homotopy_table(6, &ChartOptions::truncated(1)).unwrap();
    let b = homotopy_table(6, &ChartOptions::truncated(1).convention(Convention::Sq0IsOne)).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.dims, y.dims);
    }
}

#[test]
fn postnikov_u8() {
    let c = postnikov_chart(8, -1, Convention::Sq0IsOne).unwrap();
    let got: std::collections::BTreeSet<(u32, SqMonomial)> =
        c.classes.iter().filter(|x| c.in_window(x)).map(|x| (x.n, x.monomial.clone())).collect();
    let want: std::collections::BTreeSet<(u32, SqMonomial)> =
        reference::POSTNIKOV_U8_CLASSES.iter().map(|(n, m)| (*n, mono(m))).collect();
    assert_eq!(got, want);
    for ((sn, sm), (tn, tm)) in reference::POSTNIKOV_U8_D1 {
        let i = find(&c, *sn, sm);
        assert_eq!(c.d1_text(i), format!("u^{tn}.{}", mono(tm)));
    }
    let pos = |n: u32, m: &[u32]| {
        let x = &c.classes[find(&c, n, m)];
        (x.stem, x.filtration)
    };
    assert_eq!(pos(1, &[]), (2, 0));
    assert_eq!(pos(1, &[2]), (0, 0));
    assert_eq!(pos(2, &[]), (4, 1));
    assert_eq!(pos(4, &[6, 3]), (-1, 2));
    let e = e2_at(&c, 0, 0).unwrap();
    assert_eq!(e.representatives, vec!["u^1.Sq[2]".to_string()]);
}

#[test]
fn postnikov_totals_match_ghm_component() {
    for m in [2u32, 4, 8] {
        let p = postnikov_chart(m, -1, Convention::Sq0IsOne).unwrap();
        let pp = e2_page(&p).unwrap();
        let g = build_complex(&ChartOptions::truncated(m - 1).window((-1, 2 * (m as i32 - 1)), (0, 2 * (m - 1)))).unwrap();
        let gp = e2_page_filtered(&g, &|x: &ChartClass| x.odd_core() == 1).unwrap();
        for stem in 0..=(m as i32) {
            let a: usize = pp.iter().filter(|e| e.stem == stem).map(|e| e.dim).sum();
            let b: usize = gp.iter().filter(|e| e.stem == stem).map(|e| e.dim).sum();
            assert_eq!(a, b, "m={m} stem={stem}");
        }
    }
}

#[test]
fn stripping_relation() {
    for k in 2..=4u32 {
        for i in 1..=16u32 {
            let a = 1 << k;
            let h = 1 << (k - 1);
            let q = 1 << (k - 2);
            let x = adem_reduce(&[a * i - (q + 1), h * i], Convention::Sq0IsOne);
            let y = adem_reduce(&[a * i - 1, h * i - q], Convention::Sq0IsOne);
            assert!(x.add(&y).unwrap().is_zero(), "k={k} i={i}");
        }
    }
}

#[test]
fn probes_truncated() {
    for n in (2..=14).step_by(2) {
        let rep = homology_probe(n, 0..=(4 * n), Convention::Sq0IsZero).unwrap();
        let got: Vec<String> = rep.truncated.iter().flat_map(|s| s.representatives.clone()).collect();
        let want: Vec<String> = reference::PROBE_CLASSES
            .iter()
            .find(|(m, _)| *m == n)
            .map(|(_, ms)| ms.iter().map(|m| format!("u^{n}.{}", mono(m))).collect())
            .unwrap_or_default();
        assert_eq!(got, want, "n={n}");
    }
}

#[test]
fn sq_4i_2i_i_classes() {
    for i in 1..=8u32 {
        let x = SteenrodElement::from_admissible(Convention::Sq0IsOne, [mono(&[4 * i, 2 * i, i])]);
        assert!(is_nonzero_class(&x, 8 * i - 3, 4 * i - 1, Ambient::Full), "i={i}");
        assert_eq!(is_nonzero_class(&x, 8 * i - 3, 4 * i - 1, Ambient::Quotient), i > 1, "i={i}");
    }
}

#[test]
fn conjecture_slices() {
    // Degree 1 slice for k = 0 is zero.
    assert_eq!(subquotient_slice(1, 1, 1, Ambient::Quotient, Convention::Sq0IsOne).dim, 0);
    for k in 1..=6u32 {
        let r = check_conjecture(k, 8 * k + 1, Convention::Sq0IsOne);
        let nonzero: Vec<(u32, Vec<String>)> =
            r.slices.iter().filter(|s| s.dim > 0).map(|s| (s.degree, s.representatives.clone())).collect();
        // Frozen: below 8k+1 everything vanishes; at 8k+1 only Sq^{8k+1} survives, for k = 1, 2, 4.
        let want: Vec<(u32, Vec<String>)> =
            if [1, 2, 4].contains(&k) { vec![(8 * k + 1, vec![format!("Sq[{}]", 8 * k + 1)])] } else { vec![] };
        assert_eq!(nonzero, want, "k={k}");
    }
    let s = subquotient_slice(13, 7, 14, Ambient::Quotient, Convention::Sq0IsOne);
    assert!(s.dim > 0);
    let x = SteenrodElement::from_admissible(Convention::Sq0IsOne, [mono(&[8, 4, 2])]);
    assert!(is_nonzero_class(&x, 13, 7, Ambient::Quotient));
}
