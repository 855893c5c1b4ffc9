//! Character rings `R(V_s)`: the additive Steinberg action, K-theory of the
//! Steinberg summands with induction as transfer, and the j-theory complexes.

use serde::Serialize;

use crate::glgroup::{decode, encode, permutations, steinberg_index, FpMat};
use crate::padic::{check_generator, pow_u64, word_precision, PadicError, PadicInt};
use crate::zplinalg::{complex_homology, AbGroup, FgModule, SubQuotient, ZpMatrix};

/// `sum c_v chi_v` over `v in F_p^s`, indexed by [`encode`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharElem {
    pub p: u64,
    pub s: usize,
    pub coeffs: Vec<PadicInt>,
}

impl CharElem {
    pub fn zero(p: u64, s: usize, prec: u32) -> Self {
        CharElem { p, s, coeffs: vec![PadicInt::zero(p, prec); p.pow(s as u32) as usize] }
    }

    pub fn chi(p: u64, prec: u32, v: &[u64]) -> Self {
        let mut x = Self::zero(p, v.len(), prec);
        x.coeffs[encode(p, v)] = PadicInt::one(p, prec);
        x
    }

    pub fn precision(&self) -> u32 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap_or(0)
    }

    pub fn add(&self, o: &CharElem) -> CharElem {
        CharElem { p: self.p, s: self.s, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| *a + *b).collect() }
    }

    pub fn sub(&self, o: &CharElem) -> CharElem {
        CharElem { p: self.p, s: self.s, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| *a - *b).collect() }
    }

    pub fn scale(&self, c: PadicInt) -> CharElem {
        CharElem { p: self.p, s: self.s, coeffs: self.coeffs.iter().map(|a| *a * c).collect() }
    }

    pub fn approx_eq(&self, o: &CharElem) -> bool {
        self.s == o.s && self.coeffs.iter().zip(&o.coeffs).all(|(a, b)| (*a - *b).is_zero())
    }

    /// Virtual rank (sum of coefficients).
    pub fn rank(&self) -> PadicInt {
        self.coeffs.iter().fold(PadicInt::zero(self.p, self.precision()), |a, b| a + *b)
    }

    /// `chi_v . g = chi_{g^T v}`.
    pub fn act(&self, g: &FpMat) -> CharElem {
        let gt = g.transpose();
        let mut out = Self::zero(self.p, self.s, self.precision());
        for (code, c) in self.coeffs.iter().enumerate() {
            let w = encode(self.p, &gt.apply(&decode(self.p, self.s, code), self.p));
            out.coeffs[w] = out.coeffs[w] + *c;
        }
        out
    }

    /// `psi^l chi_v = chi_{l v}`.
    pub fn psi(&self, l: u64) -> CharElem {
        let mut out = Self::zero(self.p, self.s, self.precision());
        for (code, c) in self.coeffs.iter().enumerate() {
            let w: Vec<u64> = decode(self.p, self.s, code).iter().map(|x| x * l % self.p).collect();
            let w = encode(self.p, &w);
            out.coeffs[w] = out.coeffs[w] + *c;
        }
        out
    }

    fn column(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.residue()).collect()
    }

    fn from_column(p: u64, s: usize, prec: u32, col: &[u64]) -> CharElem {
        CharElem { p, s, coeffs: col.iter().map(|&r| PadicInt::from_residue(p, prec, r)).collect() }
    }
}

/// Position of the first nonzero coordinate, `None` for the zero vector.
fn stratum(v: &[u64]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

/// `chi_v . e_s`. The multiset `{b^T v}` is the stratum of `v` (vectors whose
/// first nonzero coordinate sits where that of `v` does), each element
/// counted `|B_s| / |stratum|` times; the signed permutation sum follows.
pub fn chi_steinberg(p: u64, prec: u32, v: &[u64]) -> CharElem {
    let s = v.len();
    let mut out = CharElem::zero(p, s, prec);
    let m = PadicInt::new(p, prec, (steinberg_index(p, s) % (1 << 62)) as i64);
    let inv_m = m.inverse().expect("index prime to p");
    let border = (p as u128 - 1).pow(s as u32) * (p as u128).pow((s * s.saturating_sub(1) / 2) as u32);
    let members: Vec<Vec<u64>> = match stratum(v) {
        None => vec![vec![0; s]],
        Some(k) => (0..p.pow(s as u32) as usize)
            .map(|c| decode(p, s, c))
            .filter(|w| stratum(w) == Some(k))
            .collect(),
    };
    let mult = (border / members.len() as u128 % (1 << 62)) as i64;
    for (sigma, sign) in permutations(s) {
        let st = sigma.transpose();
        let c = PadicInt::new(p, prec, sign * mult) * inv_m;
        for w in &members {
            let t = encode(p, &st.apply(w, p));
            out.coeffs[t] = out.coeffs[t] + c;
        }
    }
    out
}

/// `x . e_s`, extended linearly.
pub fn steinberg_add(x: &CharElem) -> CharElem {
    let prec = x.precision();
    let mut out = CharElem::zero(x.p, x.s, prec);
    for (code, c) in x.coeffs.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&chi_steinberg(x.p, prec, &decode(x.p, x.s, code)).scale(*c));
        }
    }
    out
}

/// Matrix of a linear operator on `R(V_s)` from the images of the characters.
fn operator(p: u64, s: usize, prec: u32, rows: usize, f: impl Fn(&[u64]) -> CharElem) -> ZpMatrix {
    let cols: Vec<Vec<u64>> = (0..p.pow(s as u32) as usize).map(|c| f(&decode(p, s, c)).column()).collect();
    ZpMatrix::from_columns(p, prec, rows, &cols)
}

pub fn steinberg_matrix(p: u64, s: usize, prec: u32) -> ZpMatrix {
    let n = p.pow(s as u32) as usize;
    operator(p, s, prec, n, |v| chi_steinberg(p, prec, v))
}

/// Induction along `V_s -> V_{s+1}` (last coordinates): `chi_v -> sum_a chi_{(a, v)}`.
pub fn induce(x: &CharElem) -> CharElem {
    let prec = x.precision();
    let mut out = CharElem::zero(x.p, x.s + 1, prec);
    for (code, c) in x.coeffs.iter().enumerate() {
        for a in 0..x.p as usize {
            let t = a + x.p as usize * code;
            out.coeffs[t] = out.coeffs[t] + *c;
        }
    }
    out
}

/// Transfer `K^0 M(s) -> K^0 M(s+1)`: induction, then `e_{s+1}`.
pub fn transfer_k(x: &CharElem) -> CharElem {
    steinberg_add(&induce(x))
}

fn induction_matrix(p: u64, s: usize, prec: u32) -> ZpMatrix {
    let n = p.pow(s as u32 + 1) as usize;
    operator(p, s, prec, n, |v| induce(&CharElem::chi(p, prec, v)))
}

/// Representatives `e_1, ..., e_s, 0` of the signed-orbit classes.
pub fn class_representatives(s: usize) -> Vec<Vec<u64>> {
    let mut reps: Vec<Vec<u64>> = (0..s)
        .map(|i| {
            let mut v = vec![0; s];
            v[i] = 1;
            v
        })
        .collect();
    reps.push(vec![0; s]);
    reps
}

/// Rank of `K^0 M(s) = R(V_s) . e_s` and a basis of it, from the images of the
/// class representatives.
pub fn k0_rank(s: usize, p: u64, prec: u32) -> (usize, Vec<CharElem>) {
    let cols: Vec<Vec<u64>> = class_representatives(s).iter().map(|v| chi_steinberg(p, prec, v).column()).collect();
    let m = ZpMatrix::from_columns(p, prec, p.pow(s as u32) as usize, &cols);
    let basis = m.smith().image_basis();
    let gens = basis.columns().iter().map(|c| CharElem::from_column(p, s, prec, c)).collect();
    (basis.cols(), gens)
}

/// `alpha = chi_0` in `R(V_1)`.
pub fn alpha(p: u64, prec: u32) -> CharElem {
    CharElem::chi(p, prec, &[0])
}

/// `beta = sum_{b != 0} chi_b` in `R(V_1)`.
pub fn beta(p: u64, prec: u32) -> CharElem {
    (1..p).fold(CharElem::zero(p, 1, prec), |acc, b| acc.add(&CharElem::chi(p, prec, &[b])))
}

/// `gamma = sum_{b != 0} (chi_{(b,0)} - chi_{(0,b)})` in `R(V_2)`.
pub fn gamma(p: u64, prec: u32) -> CharElem {
    (1..p).fold(CharElem::zero(p, 2, prec), |acc, b| {
        acc.add(&CharElem::chi(p, prec, &[b, 0])).sub(&CharElem::chi(p, prec, &[0, b]))
    })
}

/// Coordinates of `x` in the span of independent `gens`, if it lies there.
pub fn coordinates(x: &CharElem, gens: &[CharElem]) -> Option<Vec<PadicInt>> {
    let prec = x.precision();
    let cols: Vec<Vec<u64>> = gens.iter().map(CharElem::column).collect();
    let m = ZpMatrix::from_columns(x.p, prec, x.coeffs.len(), &cols);
    solve(&m, &x.column()).map(|y| y.into_iter().map(|r| PadicInt::from_residue(x.p, prec, r)).collect())
}

/// A solution of `m y = b`, checked by substitution.
fn solve(m: &ZpMatrix, b: &[u64]) -> Option<Vec<u64>> {
    let s = m.smith();
    let y = s.p.mul_vec(b);
    let (p, q) = (m.prime(), m.modulus());
    let mut z = vec![0u64; m.cols()];
    for (i, &k) in s.diag.iter().enumerate() {
        if k < m.precision() && y[i].is_multiple_of(pow_u64(p, k)) {
            z[i] = y[i] / pow_u64(p, k) % q;
        }
    }
    let z = s.q.mul_vec(&z);
    let tol = m.tolerance();
    let back = m.mul_vec(&z);
    back.iter().zip(b).all(|(u, v)| crate::padic::vp(p, (u + q - v) % q).is_none_or(|e| e >= tol)).then_some(z)
}

#[derive(Clone, Debug, Serialize)]
pub struct KTheoryReport {
    pub p: u64,
    pub precision: u32,
    /// Ranks of `K^0 M(s)`, `s = 0..=4`.
    pub ranks: Vec<usize>,
    /// `1 -> (alpha, beta)` coordinates.
    pub d0: Vec<PadicInt>,
    /// `alpha -> gamma`, `beta -> gamma` coordinates.
    pub d1: Vec<PadicInt>,
    pub composite_zero: bool,
    pub m_homology: Vec<AbGroup>,
    pub l_groups: Vec<AbGroup>,
    pub l_homology: Vec<AbGroup>,
    pub generators_span_image: bool,
}

impl KTheoryReport {
    pub fn exact(&self) -> bool {
        self.composite_zero && self.m_homology.iter().all(AbGroup::is_zero) && self.l_homology.iter().all(AbGroup::is_zero)
    }
}

/// `0 -> K^0 M(0) -> K^0 M(1) -> K^0 M(2) -> 0` in the generators `1; alpha,
/// beta; gamma`, and the `L` complex `0 -> K^0 L(0) -> K^0 L(1) -> 0` with
/// `K^0 L(1) = K^0 M(1) / (inflation of K^0 M(0)) = Z_p{alpha, beta}/Z_p{alpha}`.
pub fn ktheory_complex_check(p: u64, prec: u32) -> KTheoryReport {
    let ranks = (0..=4).map(|s| k0_rank(s, p, prec).0).collect();
    let one = CharElem::chi(p, prec, &[]);
    let (a, b, g) = (alpha(p, prec), beta(p, prec), gamma(p, prec));
    let ab = [a.clone(), b.clone()];
    let d0 = coordinates(&transfer_k(&one), &ab).expect("transfer of 1 lies in span(alpha, beta)");
    let mut d1 = coordinates(&transfer_k(&a), std::slice::from_ref(&g)).expect("in span(gamma)");
    d1.extend(coordinates(&transfer_k(&b), std::slice::from_ref(&g)).expect("in span(gamma)"));
    let generators_span_image = [(1usize, ab.to_vec()), (2, vec![g.clone()])].iter().all(|(s, gens)| {
        let (r, basis) = k0_rank(*s, p, prec);
        r == gens.len()
            && basis.iter().all(|x| coordinates(x, gens).is_some())
            && gens.iter().all(|x| steinberg_add(x).approx_eq(x))
    });
    let mat = |rows: usize, v: &[PadicInt], cols: usize| {
        ZpMatrix::from_fn(p, prec, rows, cols, |i, j| v[i * cols + j])
    };
    let f0 = mat(2, &d0, 1);
    let f1 = mat(1, &d1, 2);
    let composite_zero = f1.mul(&f0).is_zero();
    let modules = vec![FgModule::free(p, prec, 1), FgModule::free(p, prec, 2), FgModule::free(p, prec, 1)];
    let m_homology = complex_homology(&modules, &[f0.clone(), f1]);
    // L(1) = <alpha, beta> / <alpha>.
    let l1 = FgModule { gens: 2, relations: ZpMatrix::from_columns(p, prec, 2, &[vec![1, 0]]) };
    let l_modules = vec![FgModule::free(p, prec, 1), l1];
    let l_homology = complex_homology(&l_modules, &[f0]);
    let l_groups = l_modules.iter().map(FgModule::structure).collect();
    KTheoryReport { p, precision: prec, ranks, d0, d1, composite_zero, m_homology, l_groups, l_homology, generators_span_image }
}

#[derive(Clone, Debug, Serialize)]
pub struct JKernel {
    /// Rank of `ker(psi^l - 1)` on rank-zero characters, by Smith form.
    pub rank: usize,
    /// `sum_{0 != v in line} (chi_v - chi_0)`, one per line.
    pub basis: Vec<CharElem>,
}

/// The lines of `F_p^s`, each as its nonzero vectors.
pub fn lines(p: u64, s: usize) -> Vec<Vec<Vec<u64>>> {
    let mut seen = vec![false; p.pow(s as u32) as usize];
    let mut out = Vec::new();
    for c in 1..seen.len() {
        if seen[c] {
            continue;
        }
        let v = decode(p, s, c);
        let line: Vec<Vec<u64>> = (1..p).map(|a| v.iter().map(|x| x * a % p).collect()).collect();
        for w in &line {
            seen[encode(p, w)] = true;
        }
        out.push(line);
    }
    out
}

/// `ker(psi^l - 1)` on the rank-zero part `R_0(V_s)`.
pub fn psi_l_kernel(s: usize, p: u64, l: u64, prec: u32) -> Result<JKernel, PadicError> {
    check_generator(p, l)?;
    let n = p.pow(s as u32) as usize;
    // R_0 basis chi_v - chi_0, v != 0.
    let r0: Vec<CharElem> =
        (1..n).map(|c| CharElem::chi(p, prec, &decode(p, s, c)).sub(&CharElem::chi(p, prec, &vec![0; s]))).collect();
    let cols: Vec<Vec<u64>> = r0.iter().map(|x| x.psi(l).sub(x).column()).collect();
    let rank = if cols.is_empty() { 0 } else { ZpMatrix::from_columns(p, prec, n, &cols).kernel().cols() };
    let zero = CharElem::chi(p, prec, &vec![0; s]);
    let basis = lines(p, s)
        .iter()
        .map(|line| line.iter().fold(CharElem::zero(p, s, prec), |acc, v| acc.add(&CharElem::chi(p, prec, v)).sub(&zero)))
        .collect();
    Ok(JKernel { rank, basis })
}

/// `psi^l / l^m - 1` on `R(V_s)`.
fn adams_minus_one(p: u64, s: usize, prec: u32, l: u64, m: u64) -> ZpMatrix {
    let n = p.pow(s as u32) as usize;
    let scale = PadicInt::new(p, prec, l as i64).pow(m).inverse().expect("generator is a unit");
    operator(p, s, prec, n, |v| {
        let x = CharElem::chi(p, prec, v);
        x.psi(l).scale(scale).sub(&x)
    })
}

fn lattice_of(m: &ZpMatrix) -> SubQuotient {
    SubQuotient::lattice(m)
}

/// The `j`-theory term in loop degree `i`, as a presented module in `R(V_s)`
/// coordinates.
fn j_term(s: usize, i: u64, p: u64, l: u64, prec: u32, e: &ZpMatrix) -> (FgModule, Option<SubQuotient>) {
    let n = p.pow(s as u32) as usize;
    if i == 0 {
        let k = psi_l_kernel(s, p, l, prec).expect("generator checked");
        let cols: Vec<Vec<u64>> = k.basis.iter().map(CharElem::column).collect();
        let km = if cols.is_empty() { ZpMatrix::zeros(p, prec, n, 0) } else { ZpMatrix::from_columns(p, prec, n, &cols) };
        let sq = lattice_of(&e.mul(&km));
        (sq.module.clone(), Some(sq))
    } else if i % 2 == 1 {
        let a = adams_minus_one(p, s, prec, l, i.div_ceil(2));
        let rel = a.hcat(&ZpMatrix::identity(p, prec, n).sub(e));
        (FgModule { gens: n, relations: rel }, None)
    } else {
        let ker = adams_minus_one(p, s, prec, l, i / 2).kernel();
        let sq = lattice_of(&e.mul(&ker));
        (sq.module.clone(), Some(sq))
    }
}

fn working_precision(p: u64, prec: u32) -> Result<u32, PadicError> {
    let work = word_precision(p);
    let tol = ZpMatrix::zeros(p, work, 0, 0).tolerance();
    if prec > tol {
        return Err(PadicError::NotDivisible { value: format!("requested precision {prec} beyond {tol} usable digits"), p, k: prec });
    }
    Ok(work)
}

/// `[M(s), Omega^i j]`.
pub fn j_groups(s: usize, i: u64, p: u64, l: u64, prec: u32) -> Result<AbGroup, PadicError> {
    check_generator(p, l)?;
    let work = working_precision(p, prec)?;
    let e = steinberg_matrix(p, s, work);
    Ok(j_term(s, i, p, l, work, &e).0.structure())
}

/// `[BV_{s+}, Omega^i J]` before applying any idempotent: the kernel (`i`
/// even) or cokernel (`i` odd) of `psi^l / l^m - 1` on `R(V_s)`, with the
/// rank-zero part for `i = 0`.
pub fn bv_j_group(s: usize, i: u64, p: u64, l: u64, prec: u32) -> Result<AbGroup, PadicError> {
    check_generator(p, l)?;
    let work = working_precision(p, prec)?;
    let id = ZpMatrix::identity(p, work, p.pow(s as u32) as usize);
    Ok(j_term(s, i, p, l, work, &id).0.structure())
}

#[derive(Clone, Debug, Serialize)]
pub struct JReport {
    pub p: u64,
    pub l: u64,
    pub i: u64,
    pub precision: u32,
    pub m_groups: Vec<AbGroup>,
    pub m_homology: Vec<AbGroup>,
    pub d_squared_zero: bool,
    /// `[L(0)] = [M(0)]`, then `[L(s)] = [M(s)] - [L(s-1)]`.
    pub l_groups: Vec<AbGroup>,
    /// `None` where the maps between neighbouring nonzero groups are not determined.
    pub l_homology: Vec<Option<AbGroup>>,
    pub notes: Vec<String>,
}

/// Homology of `s -> [M(s), Omega^i j]`, `s = 0..=s_max`, with transfers
/// `e_{s+1} Ind e_s`.
pub fn j_complex_homology(p: u64, l: u64, prec: u32, i: u64, s_max: usize) -> Result<JReport, PadicError> {
    check_generator(p, l)?;
    let work = working_precision(p, prec)?;
    let es: Vec<ZpMatrix> = (0..=s_max).map(|s| steinberg_matrix(p, s, work)).collect();
    let terms: Vec<(FgModule, Option<SubQuotient>)> = (0..=s_max).map(|s| j_term(s, i, p, l, work, &es[s])).collect();
    let mut maps = Vec::new();
    for s in 0..s_max {
        let d = es[s + 1].mul(&induction_matrix(p, s, work)).mul(&es[s]);
        maps.push(match (&terms[s].1, &terms[s + 1].1) {
            (Some(a), Some(b)) => a.map_to(&d, b).expect("transfer preserves the subgroups"),
            _ => d,
        });
    }
    let modules: Vec<FgModule> = terms.iter().map(|t| t.0.clone()).collect();
    let d_squared_zero =
        (0..maps.len().saturating_sub(1)).all(|s| crate::zplinalg::composite_vanishes(&maps[s], &maps[s + 1], &modules[s + 2]));
    let m_groups: Vec<AbGroup> = modules.iter().map(FgModule::structure).collect();
    let m_homology = complex_homology(&modules, &maps);
    let (l_groups, l_homology, notes) = split_l_variant(p, work, &terms, &maps, &m_groups);
    Ok(JReport { p, l, i, precision: prec, m_groups, m_homology, d_squared_zero, l_groups, l_homology, notes })
}

/// `[L(0)] = [M(0)]`; `[L(1)] = [M(1)]` modulo the inflation of `[M(0)]`
/// (the trivial character); `[L(s)]`, `s >= 2`, by cancelling `[L(s-1)]` from
/// `[M(s)] = [L(s)] + [L(s-1)]`. Homology past `s = 1` is known only where a
/// neighbouring group vanishes.
fn split_l_variant(
    p: u64,
    prec: u32,
    terms: &[(FgModule, Option<SubQuotient>)],
    maps: &[ZpMatrix],
    m_groups: &[AbGroup],
) -> (Vec<AbGroup>, Vec<Option<AbGroup>>, Vec<String>) {
    let mut notes = Vec::new();
    let mut infl = ZpMatrix::zeros(p, prec, p as usize, 1);
    infl.set(0, 0, 1);
    let infl = match (&terms[0].1, &terms[1].1) {
        (Some(a), Some(b)) => a.map_to(&infl, b).expect("constants lie in the degree-one term"),
        _ => infl,
    };
    let (m0, m1) = (&terms[0].0, &terms[1].0);
    let l1 = FgModule { gens: m1.gens, relations: m1.relations.hcat(&infl) };
    let mut l = vec![m_groups[0].clone(), l1.structure()];
    for (s, g) in m_groups.iter().enumerate().skip(2) {
        match g.cancel(&l[s - 1]) {
            Some(h) => l.push(h),
            None => {
                notes.push(format!("[M({s})] = {g} has no summand [L({})] = {}", s - 1, l[s - 1]));
                l.push(AbGroup::zero(p));
            }
        }
    }
    let none_in = ZpMatrix::zeros(p, prec, m0.gens, 0);
    let zero = FgModule::free(p, prec, 0);
    let mut h = vec![Some(crate::zplinalg::homology(&none_in, m0, &maps[0], &l1))];
    h.push(if l.len() < 3 || l[2].is_zero() {
        Some(crate::zplinalg::homology(&maps[0], &l1, &ZpMatrix::zeros(p, prec, 0, l1.gens), &zero))
    } else {
        None
    });
    for s in 2..l.len() {
        let after = s + 1 == l.len() || l[s + 1].is_zero();
        h.push(if l[s].is_zero() {
            Some(AbGroup::zero(p))
        } else if l[s - 1].is_zero() && after {
            Some(l[s].clone())
        } else {
            None
        });
    }
    for (s, x) in h.iter().enumerate() {
        if x.is_none() {
            notes.push(format!("homology at L({s}) needs maps between nonzero groups"));
        }
    }
    (l, h, notes)
}

/// `(-1)^{p-1} + l^{-i(p-1)}`, a unit for odd `p`.
pub fn determinant_factor(p: u64, l: u64, i: u64, prec: u32) -> PadicInt {
    let sign = if (p - 1).is_multiple_of(2) { 1 } else { -1 };
    let li = PadicInt::new(p, prec, l as i64).pow(i * (p - 1)).inverse().expect("unit");
    PadicInt::new(p, prec, sign) + li
}
