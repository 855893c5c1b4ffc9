//! Published values that the check commands compare against.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::ghm::{ChartClass, CoKoszulComplex};
use crate::steenrod::SqMonomial;

/// Dimensions of `pi_i` of strict units of `F2[u]/u^{n+1}`; row `n - 1`,
/// entries `i = 0..=2n`.
pub const TABLE: [&[usize]; 8] = [
    &[1, 0, 1],
    &[1, 0, 1, 0, 1],
    &[3, 1, 2, 1, 2, 0, 1],
    &[5, 2, 3, 1, 2, 1, 2, 0, 1],
    &[8, 5, 5, 3, 4, 2, 3, 1, 2, 0, 1],
    &[9, 7, 7, 4, 5, 3, 4, 2, 3, 1, 2, 0, 1],
    &[14, 11, 11, 7, 8, 6, 6, 4, 5, 2, 3, 1, 2, 0, 1],
    &[17, 14, 14, 10, 10, 7, 8, 6, 6, 4, 5, 2, 3, 1, 2, 0, 1],
];

/// E1 classes `(n, monomial)` of the chart for `F2[u]/u^6` in stems `-1..=10`,
/// filtrations `0..=2`, in the order drawn.
pub const CHART_M5_CLASSES: &[(u32, &[u32])] = &[
    (1, &[]),
    (1, &[2]),
    (1, &[3]),
    (2, &[]),
    (2, &[2]),
    (2, &[3]),
    (2, &[4]),
    (2, &[5]),
    (3, &[]),
    (3, &[2]),
    (3, &[3]),
    (3, &[4]),
    (3, &[5]),
    (3, &[6]),
    (3, &[7]),
    (4, &[]),
    (4, &[2]),
    (4, &[3]),
    (4, &[4]),
    (4, &[5]),
    (4, &[6]),
    (4, &[4, 2]),
    (4, &[7]),
    (4, &[5, 2]),
    (4, &[8]),
    (4, &[6, 2]),
    (4, &[9]),
    (4, &[7, 2]),
    (4, &[6, 3]),
    (5, &[]),
    (5, &[2]),
    (5, &[3]),
    (5, &[4]),
    (5, &[5]),
    (5, &[6]),
    (5, &[4, 2]),
    (5, &[7]),
    (5, &[5, 2]),
    (5, &[8]),
    (5, &[6, 2]),
    (5, &[9]),
    (5, &[7, 2]),
    (5, &[6, 3]),
    (5, &[10]),
    (5, &[8, 2]),
    (5, &[7, 3]),
    (5, &[11]),
    (5, &[9, 2]),
    (5, &[8, 3]),
];

/// `d1` arrows of that chart as (source stem, source filtration, target stem,
/// target filtration).
pub const CHART_M5_ARROWS: &[(i32, u32, i32, u32)] = &[(2, 0, 1, 1), (4, 0, 3, 1), (2, 1, 1, 2), (0, 1, -1, 2)];

/// E1 classes `(n, monomial)` of the Postnikov chart for `g1/u^8`; the
/// filtration is `log2 n`.
pub const POSTNIKOV_U8_CLASSES: &[(u32, &[u32])] = &[
    (1, &[]),
    (1, &[2]),
    (1, &[3]),
    (2, &[]),
    (2, &[2]),
    (2, &[3]),
    (2, &[4]),
    (2, &[5]),
    (4, &[]),
    (4, &[2]),
    (4, &[3]),
    (4, &[4]),
    (4, &[5]),
    (4, &[6]),
    (4, &[4, 2]),
    (4, &[7]),
    (4, &[5, 2]),
    (4, &[8]),
    (4, &[6, 2]),
    (4, &[9]),
    (4, &[7, 2]),
    (4, &[6, 3]),
];

/// Postnikov `d1` as (source, target) class pairs.
pub const POSTNIKOV_U8_D1: &[((u32, &[u32]), (u32, &[u32]))] = &[
    ((1, &[]), (2, &[3])),
    ((2, &[]), (4, &[5])),
    ((2, &[2]), (4, &[5, 2])),
    ((2, &[4]), (4, &[7, 2])),
];

/// Nonzero classes of `ker Sq^{2n+1} / im Sq^{n+1}` on `L(0)_{<2n}` for even
/// `n <= 15`, as `(n, monomials)`.
pub const PROBE_CLASSES: &[(u32, &[&[u32]])] = &[
    (6, &[&[8, 4, 2]]),
    (10, &[&[12, 6, 3]]),
    (14, &[&[16, 8, 4], &[16, 8, 4, 2], &[17, 8, 4, 2]]),
];

/// Differences between a computed chart and a published class/arrow list.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ChartDiff {
    pub missing_classes: Vec<String>,
    pub extra_classes: Vec<String>,
    pub missing_arrows: Vec<(i32, u32, i32, u32)>,
    pub extra_arrows: Vec<(i32, u32, i32, u32)>,
}

impl ChartDiff {
    pub fn is_empty(&self) -> bool {
        self.missing_classes.is_empty()
            && self.extra_classes.is_empty()
            && self.missing_arrows.is_empty()
            && self.extra_arrows.is_empty()
    }
}

/// Bidegree pairs joined by a nonzero `d1` between window classes.
pub fn chart_arrows(c: &CoKoszulComplex) -> BTreeSet<(i32, u32, i32, u32)> {
    let mut out = BTreeSet::new();
    for i in c.window_classes() {
        let s = &c.classes[i];
        if let Some(targets) = &c.d1[i] {
            for &j in targets {
                let t = &c.classes[j];
                if c.reported[j] && c.in_window(t) {
                    out.insert((s.stem, s.filtration, t.stem, t.filtration));
                }
            }
        }
    }
    out
}

/// Compares the window classes and arrows of `c` with the published lists.
pub fn compare_chart(c: &CoKoszulComplex, classes: &[(u32, &[u32])], arrows: &[(i32, u32, i32, u32)]) -> ChartDiff {
    let expected: BTreeSet<ChartClass> =
        classes.iter().map(|(n, m)| ChartClass::new(*n, SqMonomial::new(m.to_vec()))).collect();
    let computed: BTreeSet<ChartClass> = c.window_classes().into_iter().map(|i| c.classes[i].clone()).collect();
    let exp_arrows: BTreeSet<_> = arrows.iter().copied().collect();
    let got_arrows = chart_arrows(c);
    ChartDiff {
        missing_classes: expected.difference(&computed).map(|x| x.to_string()).collect(),
        extra_classes: computed.difference(&expected).map(|x| x.to_string()).collect(),
        missing_arrows: exp_arrows.difference(&got_arrows).copied().collect(),
        extra_arrows: got_arrows.difference(&exp_arrows).copied().collect(),
    }
}
