//! The unstable co-Koszul complex `prod_n u^n ⊗ L(0)_{<2n}` with
//! `d1(u^n ⊗ x) = u^{2n} ⊗ Sq^{2n+1} x`, its E2 page, the homotopy table for
//! truncated polynomial algebras, the Postnikov regrading, and the subquotient
//! probes `ker Sq^{2n+1} / im Sq^{n+1}`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::f2core::{rank_kernel_image, subquotient, F2Matrix, F2Vec};
use crate::steenrod::{basis, left_mult_matrix, left_multiply, Convention, SqMonomial, SteenrodElement};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GhmError {
    #[error("bidegree ({stem},{filtration}) needs neighbours outside the built window")]
    WindowTooSmall { stem: i32, filtration: u32 },
    #[error("d1 of {class} leaves its splitting component")]
    SplitViolated { class: String },
    #[error("d1 of {class} has a term {term} outside filtration {expected}")]
    Inhomogeneous { class: String, term: String, expected: u32 },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// Which inequality cuts `L(0)` down to the summand paired with `u^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DomainRule {
    /// `|I| < 2n + slack`, with `|I| = sum (i_j - 1)` the degree of `Sq^{I+1}`
    /// as a dual Dyer-Lashof monomial.
    Reduced,
    /// `sum i_j < 2n + slack`, reading the subscript as the Steenrod degree.
    SteenrodDegree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Truncation {
    /// `F2[u]/u^{m+1}`: only `n <= m`, and `d1` vanishes on `u^n` once `2n > m`.
    Finite(u32),
    /// `F2[u]`, reporting exponents `n <= n_max`; targets up to `2 n_max` are
    /// built as padding.
    Unbounded { n_max: u32 },
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartOptions {
    pub truncation: Truncation,
    pub stem_min: i32,
    pub stem_max: i32,
    pub filtration_min: u32,
    pub filtration_max: u32,
    pub slack: u32,
    pub rule: DomainRule,
    pub convention: Convention,
}

impl ChartOptions {
    pub fn truncated(m: u32) -> Self {
        ChartOptions {
            truncation: Truncation::Finite(m),
            stem_min: -1,
            stem_max: 2 * m as i32,
            filtration_min: 0,
            filtration_max: 2 * m,
            slack: 0,
            rule: DomainRule::Reduced,
            convention: Convention::Sq0IsZero,
        }
    }

    pub fn window(mut self, stems: (i32, i32), filtrations: (u32, u32)) -> Self {
        self.stem_min = stems.0;
        self.stem_max = stems.1;
        self.filtration_min = filtrations.0;
        self.filtration_max = filtrations.1;
        self
    }

    pub fn slack(mut self, slack: u32) -> Self {
        self.slack = slack;
        self
    }

    pub fn rule(mut self, rule: DomainRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    fn in_domain(&self, n: u32, x: &SqMonomial) -> bool {
        let size = match self.rule {
            DomainRule::Reduced => x.reduced_degree(),
            DomainRule::SteenrodDegree => x.degree(),
        };
        size < 2 * n + self.slack
    }

    fn reported_n_max(&self) -> u32 {
        match self.truncation {
            Truncation::Finite(m) => m,
            Truncation::Unbounded { n_max } => n_max,
        }
    }

    fn built_n_max(&self) -> u32 {
        match self.truncation {
            Truncation::Finite(m) => m,
            Truncation::Unbounded { n_max } => 2 * n_max,
        }
    }

    fn d1_active(&self, n: u32) -> bool {
        match self.truncation {
            Truncation::Finite(m) => 2 * n <= m,
            Truncation::Unbounded { .. } => true,
        }
    }
}

/// `u^n ⊗ Sq^I` placed at (stem, filtration).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ChartClass {
    pub n: u32,
    #[serde(serialize_with = "ser_display")]
    pub monomial: SqMonomial,
    pub stem: i32,
    pub filtration: u32,
}

fn ser_display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl ChartClass {
    pub fn new(n: u32, monomial: SqMonomial) -> Self {
        let stem = 2 * n as i32 - monomial.degree() as i32;
        let filtration = monomial.len() as u32;
        ChartClass { n, monomial, stem, filtration }
    }

    /// Odd part `k` of `n = k 2^j`.
    pub fn odd_core(&self) -> u32 {
        self.n >> self.n.trailing_zeros()
    }
}

impl fmt::Display for ChartClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u^{}.{}", self.n, self.monomial)
    }
}

/// Classes in a window together with the `d1` on each of them.
#[derive(Clone, Debug)]
pub struct CoKoszulComplex {
    pub options: ChartOptions,
    pub classes: Vec<ChartClass>,
    /// Whether the class lies in the reported range (not padding).
    pub reported: Vec<bool>,
    /// Indices of the `d1` target classes; `None` when the targets were not built.
    pub d1: Vec<Option<Vec<usize>>>,
    /// `d1` terms discarded because they fall outside the domain rule.
    pub dropped_terms: usize,
    /// How filtration is assigned; `Length` for the co-Koszul grading.
    pub grading: Grading,
    by_bidegree: BTreeMap<(i32, u32), Vec<usize>>,
    built_stems: (i32, i32),
    built_filtrations: (u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Grading {
    Length,
    /// Postnikov filtration `j` for `u^{2^j}`.
    Postnikov,
}

fn classes_at(stem: i32, n: u32, len: Option<u32>) -> Vec<SqMonomial> {
    let deg = 2 * n as i32 - stem;
    if deg < 0 {
        return Vec::new();
    }
    basis(deg as u32, true)
        .monomials
        .iter()
        .filter(|m| len.is_none_or(|l| m.len() as u32 == l))
        .cloned()
        .collect()
}

impl CoKoszulComplex {
    fn assemble(
        options: ChartOptions,
        grading: Grading,
        mut classes: Vec<ChartClass>,
        reported_pred: impl Fn(&ChartClass) -> bool,
        d1_rule: impl Fn(&ChartClass) -> Option<u32>,
        built_stems: (i32, i32),
        built_filtrations: (u32, u32),
    ) -> Result<Self, GhmError> {
        classes.sort_by(|a, b| {
            (a.stem, a.filtration, a.n, &a.monomial).cmp(&(b.stem, b.filtration, b.n, &b.monomial))
        });
        let mut by_bidegree: BTreeMap<(i32, u32), Vec<usize>> = BTreeMap::new();
        let mut lookup = std::collections::HashMap::new();
        for (i, c) in classes.iter().enumerate() {
            by_bidegree.entry((c.stem, c.filtration)).or_default().push(i);
            lookup.insert((c.n, c.monomial.clone()), i);
        }
        let reported = classes.iter().map(&reported_pred).collect();
        let mut dropped = 0usize;
        let mut d1 = Vec::with_capacity(classes.len());
        for c in &classes {
            let Some(k) = d1_rule(c) else {
                d1.push(Some(Vec::new()));
                continue;
            };
            let target_n = 2 * c.n;
            let target_stem = c.stem - 1;
            let target_filt = c.filtration + 1;
            let in_built = |s: i32, f: u32| {
                s >= built_stems.0 && s <= built_stems.1 && f >= built_filtrations.0 && f <= built_filtrations.1
            };
            if target_n > options.built_n_max() || !in_built(target_stem, target_filt) {
                d1.push(None);
                continue;
            }
            let x = SteenrodElement::from_admissible(options.convention, [c.monomial.clone()]).into_quotient();
            let y = left_multiply(k, &x);
            let mut targets = Vec::new();
            for t in y.terms() {
                if grading == Grading::Length && t.len() as u32 != target_filt {
                    return Err(GhmError::Inhomogeneous {
                        class: c.to_string(),
                        term: t.to_string(),
                        expected: target_filt,
                    });
                }
                match lookup.get(&(target_n, t.clone())) {
                    Some(&j) => targets.push(j),
                    None => dropped += 1,
                }
            }
            targets.sort_unstable();
            d1.push(Some(targets));
        }
        Ok(CoKoszulComplex {
            options,
            classes,
            reported,
            d1,
            dropped_terms: dropped,
            grading,
            by_bidegree,
            built_stems,
            built_filtrations,
        })
    }

    pub fn classes_in(&self, stem: i32, filtration: u32) -> Vec<&ChartClass> {
        self.by_bidegree
            .get(&(stem, filtration))
            .map(|v| v.iter().map(|&i| &self.classes[i]).collect())
            .unwrap_or_default()
    }

    fn indices_in(&self, stem: i32, filtration: u32) -> &[usize] {
        self.by_bidegree.get(&(stem, filtration)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn in_window(&self, c: &ChartClass) -> bool {
        let o = &self.options;
        c.stem >= o.stem_min && c.stem <= o.stem_max && c.filtration >= o.filtration_min && c.filtration <= o.filtration_max
    }

    /// Reported classes inside the requested window, in chart order.
    pub fn window_classes(&self) -> Vec<usize> {
        (0..self.classes.len()).filter(|&i| self.reported[i] && self.in_window(&self.classes[i])).collect()
    }

    pub fn d1_text(&self, i: usize) -> String {
        match &self.d1[i] {
            None => "?".to_string(),
            Some(t) if t.is_empty() => "0".to_string(),
            Some(t) => t.iter().map(|&j| self.classes[j].to_string()).collect::<Vec<_>>().join("+"),
        }
    }

    /// Checks `d1 ∘ d1 = 0` wherever both maps were built; returns the number of
    /// composable pairs inspected.
    pub fn check_d1_squared(&self) -> Result<usize, String> {
        let mut checked = 0;
        for (i, d) in self.d1.iter().enumerate() {
            let Some(targets) = d else { continue };
            let mut acc: BTreeMap<usize, bool> = BTreeMap::new();
            let mut complete = true;
            for &j in targets {
                match &self.d1[j] {
                    Some(tt) => {
                        for &k in tt {
                            let e = acc.entry(k).or_insert(false);
                            *e = !*e;
                        }
                    }
                    None => complete = false,
                }
            }
            if !complete {
                continue;
            }
            checked += 1;
            if acc.values().any(|&b| b) {
                return Err(format!("d1(d1({})) != 0", self.classes[i]));
            }
        }
        Ok(checked)
    }

    fn has_bidegree(&self, stem: i32, filtration: u32) -> bool {
        stem >= self.built_stems.0
            && stem <= self.built_stems.1
            && filtration >= self.built_filtrations.0
            && filtration <= self.built_filtrations.1
    }
}

/// Builds the co-Koszul complex for the requested window, with one extra stem
/// and filtration on each side so in-window homology is exact.
pub fn build_complex(options: &ChartOptions) -> Result<CoKoszulComplex, GhmError> {
    if options.stem_min > options.stem_max || options.filtration_min > options.filtration_max {
        return Err(GhmError::Invalid("empty window".into()));
    }
    let stems = (options.stem_min - 1, options.stem_max + 1);
    let filts = (options.filtration_min.saturating_sub(1), options.filtration_max + 1);
    let mut classes = Vec::new();
    for n in 1..=options.built_n_max() {
        for stem in stems.0..=stems.1 {
            for x in classes_at(stem, n, None) {
                let f = x.len() as u32;
                if f >= filts.0 && f <= filts.1 && options.in_domain(n, &x) {
                    classes.push(ChartClass::new(n, x));
                }
            }
        }
    }
    let n_rep = options.reported_n_max();
    let opts = options.clone();
    CoKoszulComplex::assemble(
        options.clone(),
        Grading::Length,
        classes,
        |c| c.n <= n_rep,
        move |c| opts.d1_active(c.n).then_some(2 * c.n + 1),
        stems,
        filts,
    )
}

/// Homology at one bidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct E2Entry {
    pub stem: i32,
    pub filtration: u32,
    pub dim: usize,
    pub representatives: Vec<String>,
}

fn e2_at_filtered(c: &CoKoszulComplex, stem: i32, filtration: u32, keep: &dyn Fn(&ChartClass) -> bool) -> Result<E2Entry, GhmError> {
    let too_small = GhmError::WindowTooSmall { stem, filtration };
    if !c.has_bidegree(stem - 1, filtration + 1) || (filtration > 0 && !c.has_bidegree(stem + 1, filtration - 1)) {
        return Err(too_small);
    }
    let keep_idx = |i: usize| c.reported[i] && keep(&c.classes[i]);
    let here: Vec<usize> = c.indices_in(stem, filtration).iter().copied().filter(|&i| keep_idx(i)).collect();
    if here.is_empty() {
        return Ok(E2Entry { stem, filtration, dim: 0, representatives: vec![] });
    }
    let pos: BTreeMap<usize, usize> = here.iter().enumerate().map(|(k, &i)| (i, k)).collect();

    let below: Vec<usize> = c.indices_in(stem - 1, filtration + 1).to_vec();
    let below_pos: BTreeMap<usize, usize> = below.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut out = F2Matrix::zeros(below.len(), here.len());
    for (col, &i) in here.iter().enumerate() {
        let targets = c.d1[i].as_ref().ok_or(too_small.clone())?;
        for t in targets {
            out.set(below_pos[t], col, true);
        }
    }
    let (_, kernel, _) = rank_kernel_image(&out);

    let mut image = Vec::new();
    if filtration > 0 {
        for &j in c.indices_in(stem + 1, filtration - 1) {
            let src = &c.classes[j];
            if !here.iter().any(|&i| c.classes[i].n == 2 * src.n) {
                continue;
            }
            let targets = c.d1[j].as_ref().ok_or(too_small.clone())?;
            let v = F2Vec::from_indices(here.len(), targets.iter().filter_map(|t| pos.get(t).copied()));
            if !v.is_zero() {
                image.push(v);
            }
        }
    }
    let (dim, reps) = subquotient(&kernel, &image).map_err(|e| GhmError::Invalid(format!("{e} at ({stem},{filtration})")))?;
    let representatives = reps
        .iter()
        .map(|v| v.ones().map(|k| c.classes[here[k]].to_string()).collect::<Vec<_>>().join("+"))
        .collect();
    Ok(E2Entry { stem, filtration, dim, representatives })
}

pub fn e2_at(c: &CoKoszulComplex, stem: i32, filtration: u32) -> Result<E2Entry, GhmError> {
    e2_at_filtered(c, stem, filtration, &|_| true)
}

/// E2 over the window, one entry per bidegree in (stem, filtration) order.
pub fn e2_page(c: &CoKoszulComplex) -> Result<Vec<E2Entry>, GhmError> {
    e2_page_filtered(c, &|_| true)
}

/// E2 of the subcomplex spanned by classes accepted by `keep`, which must be
/// closed under `d1` (a union of splitting components).
pub fn e2_page_filtered(c: &CoKoszulComplex, keep: &(dyn Fn(&ChartClass) -> bool + Sync)) -> Result<Vec<E2Entry>, GhmError> {
    let o = &c.options;
    let cells: Vec<(i32, u32)> = (o.stem_min..=o.stem_max)
        .flat_map(|s| (o.filtration_min..=o.filtration_max).map(move |f| (s, f)))
        .collect();
    cells.par_iter().map(|&(s, f)| e2_at_filtered(c, s, f, keep)).collect()
}

/// Classes grouped by the odd core of `n`; fails if some `d1` crosses groups.
pub fn splitting_components(c: &CoKoszulComplex) -> Result<BTreeMap<u32, Vec<ChartClass>>, GhmError> {
    let mut out: BTreeMap<u32, Vec<ChartClass>> = BTreeMap::new();
    for (i, cl) in c.classes.iter().enumerate() {
        if let Some(t) = &c.d1[i] {
            if t.iter().any(|&j| c.classes[j].odd_core() != cl.odd_core()) {
                return Err(GhmError::SplitViolated { class: cl.to_string() });
            }
        }
        if c.reported[i] && c.in_window(cl) {
            out.entry(cl.odd_core()).or_default().push(cl.clone());
        }
    }
    Ok(out)
}

/// Whether some nonzero E2 class at stem `a >= 0` could support a `d_r`, `r >= 2`.
#[derive(Clone, Debug, Serialize)]
pub struct Collapse {
    pub certified: bool,
    pub obstructions: Vec<(i32, u32, i32, u32)>,
}

pub fn certify_collapse(page: &[E2Entry]) -> Collapse {
    let nonzero: BTreeMap<(i32, u32), usize> =
        page.iter().filter(|e| e.dim > 0).map(|e| ((e.stem, e.filtration), e.dim)).collect();
    let mut obstructions = Vec::new();
    for &(a, s) in nonzero.keys() {
        if a < 0 {
            continue;
        }
        for (&(b, t), _) in nonzero.range((a - 1, s + 2)..=(a - 1, u32::MAX)) {
            debug_assert_eq!(b, a - 1);
            obstructions.push((a, s, b, t));
        }
    }
    Collapse { certified: obstructions.is_empty(), obstructions }
}

/// One column of the homotopy table: `dims[i] = sum_s dim E2(i, s)`.
#[derive(Clone, Debug, Serialize)]
pub struct TableColumn {
    pub n: u32,
    pub dims: Vec<usize>,
    pub collapse: Collapse,
}

pub fn homotopy_column(m: u32, options: &ChartOptions) -> Result<TableColumn, GhmError> {
    let opts = ChartOptions { truncation: Truncation::Finite(m), stem_min: -1, stem_max: 2 * m as i32 + 1, filtration_min: 0, filtration_max: 2 * m + options.slack, ..options.clone() };
    let c = build_complex(&opts)?;
    let page = e2_page(&c)?;
    let mut dims = vec![0usize; 2 * m as usize + 1];
    for e in &page {
        if e.stem >= 0 && (e.stem as usize) < dims.len() {
            dims[e.stem as usize] += e.dim;
        }
    }
    let collapse = certify_collapse(&page);
    Ok(TableColumn { n: m, dims, collapse })
}

/// Columns `n = 1..=m_max` of dimensions of `pi_i` of strict units of
/// `F2[u]/u^{n+1}`, for `0 <= i <= 2n`.
pub fn homotopy_table(m_max: u32, options: &ChartOptions) -> Result<Vec<TableColumn>, GhmError> {
    (1..=m_max).into_par_iter().map(|m| homotopy_column(m, options)).collect()
}

/// Postnikov regrading for `g1/u^m`: classes `u^{2^j} ⊗ x` with `2^j < m`,
/// `x` in `A/A·Sq^1`, filtration `j`, `d1 = Sq^{2^{j+1}+1}`.
pub fn postnikov_chart(m: u32, stem_min: i32, convention: Convention) -> Result<CoKoszulComplex, GhmError> {
    if m < 2 || !m.is_power_of_two() {
        return Err(GhmError::Invalid(format!("{m} is not a power of two >= 2")));
    }
    let top = m.trailing_zeros();
    let stems = (stem_min - 1, m as i32 + 1);
    let mut classes = Vec::new();
    for j in 0..top {
        let n = 1u32 << j;
        for stem in stems.0..=(2 * n as i32) {
            for x in classes_at(stem, n, None) {
                classes.push(ChartClass { filtration: j, ..ChartClass::new(n, x) });
            }
        }
    }
    let options = ChartOptions {
        truncation: Truncation::Finite(m - 1),
        stem_min,
        stem_max: m as i32,
        filtration_min: 0,
        filtration_max: top - 1,
        slack: 0,
        rule: DomainRule::Reduced,
        convention,
    };
    let half = m / 2;
    CoKoszulComplex::assemble(
        options,
        Grading::Postnikov,
        classes,
        |_| true,
        move |c| (c.n < half).then_some(2 * c.n + 1),
        stems,
        (0, top),
    )
}

/// `dim ker Sq^a / im Sq^b` on one degree slice.
#[derive(Clone, Debug, Serialize)]
pub struct SubquotientSlice {
    pub degree: u32,
    pub dim: usize,
    pub representatives: Vec<String>,
}

/// Ambient algebra for subquotient computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Ambient {
    /// `A/A·Sq^1`, admissible monomials not ending in 1.
    Quotient,
    /// The whole algebra.
    Full,
}

/// `ker Sq^a / im Sq^b` in source degree `d`, where `Sq^a Sq^b = 0` is required.
pub fn subquotient_slice(a: u32, b: u32, d: u32, ambient: Ambient, convention: Convention) -> SubquotientSlice {
    let q = ambient == Ambient::Quotient;
    let here = basis(d, q);
    let out = left_mult_matrix(a, d, q, convention);
    let (_, kernel, _) = rank_kernel_image(&out);
    let image: Vec<F2Vec> = if d >= b {
        let m = left_mult_matrix(b, d - b, q, convention);
        (0..m.cols()).map(|j| m.column(j)).filter(|v| !v.is_zero()).collect()
    } else {
        Vec::new()
    };
    let (dim, reps) = subquotient(&kernel, &image).expect("Sq^a Sq^b must vanish");
    let representatives =
        reps.iter().map(|v| here.element(convention, v).to_string()).collect();
    SubquotientSlice { degree: d, dim, representatives }
}

/// Whether `x` (homogeneous of degree `d`) is a cycle for `Sq^a` and not a
/// boundary from `Sq^b`.
pub fn is_nonzero_class(x: &SteenrodElement, a: u32, b: u32, ambient: Ambient) -> bool {
    let q = ambient == Ambient::Quotient;
    let x = if q { x.clone().into_quotient() } else { x.clone() };
    let Some(d) = x.homogeneous_degree() else { return false };
    if !left_multiply(a, &x).is_zero() {
        return false;
    }
    let here = basis(d, q);
    let v = here.coordinates(&x);
    let mut span = crate::f2core::EchelonSpan::new(here.len());
    if d >= b {
        let m = left_mult_matrix(b, d - b, q, x.convention());
        for j in 0..m.cols() {
            span.insert(&m.column(j));
        }
    }
    !span.contains(&v)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub k: u32,
    pub degree_cap: u32,
    pub slices: Vec<SubquotientSlice>,
    pub holds: bool,
}

/// `ker Sq^{8k+1} / im Sq^{4k+1}` on `A/A·Sq^1` in degrees `0..=degree_cap`.
pub fn check_conjecture(k: u32, degree_cap: u32, convention: Convention) -> ConjectureReport {
    let slices: Vec<SubquotientSlice> = (0..=degree_cap)
        .into_par_iter()
        .map(|d| subquotient_slice(8 * k + 1, 4 * k + 1, d, Ambient::Quotient, convention))
        .collect();
    let holds = slices.iter().all(|s| s.dim == 0);
    ConjectureReport { k, degree_cap, slices, holds }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub n: u32,
    /// Per degree, homology of `ker Sq^{2n+1} / im Sq^{n+1}` on `A/A·Sq^1`.
    pub untruncated: Vec<SubquotientSlice>,
    /// The same restricted to `L(0)_{<2n}` (reduced degree below `2n`), as the
    /// E2 summand of `u^n` in the unbounded complex.
    pub truncated: Vec<SubquotientSlice>,
}

/// Homology basis per degree in `degrees`, untruncated and truncated.
pub fn homology_probe(n: u32, degrees: std::ops::RangeInclusive<u32>, convention: Convention) -> Result<ProbeReport, GhmError> {
    if n < 2 || n % 2 == 1 {
        return Err(GhmError::Invalid(format!("probe needs even n >= 2, got {n}")));
    }
    let untruncated: Vec<SubquotientSlice> = degrees
        .clone()
        .into_par_iter()
        .map(|d| subquotient_slice(2 * n + 1, n + 1, d, Ambient::Quotient, convention))
        .collect();
    let truncated = degrees
        .into_par_iter()
        .map(|d| truncated_slice(n, d, convention))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProbeReport { n, untruncated, truncated })
}

/// E2 of the unbounded complex at `u^n` in Steenrod degree `d`, summed over lengths.
fn truncated_slice(n: u32, d: u32, convention: Convention) -> Result<SubquotientSlice, GhmError> {
    let stem = 2 * n as i32 - d as i32;
    let max_len = basis(d, true).monomials.iter().map(|m| m.len() as u32).max().unwrap_or(0);
    let opts = ChartOptions {
        truncation: Truncation::Unbounded { n_max: n },
        stem_min: stem,
        stem_max: stem,
        filtration_min: 0,
        filtration_max: max_len,
        slack: 0,
        rule: DomainRule::Reduced,
        convention,
    };
    let c = build_complex(&opts)?;
    let page = e2_page_filtered(&c, &|cl: &ChartClass| cl.n == n)?;
    let dim = page.iter().map(|e| e.dim).sum();
    let representatives = page.into_iter().flat_map(|e| e.representatives).collect();
    Ok(SubquotientSlice { degree: d, dim, representatives })
}
