//! Burnside rings `A(V_s)` of elementary abelian p-groups: marks, norms, the
//! multiplicative Steinberg action, and the complexes of unit groups.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::glgroup::{
    borel, borel_generators, permutations, steinberg_index, FpMat, Subspace, SubspaceLattice,
};
use crate::padic::{pow_u64, word_precision, PadicError, PadicInt};
use crate::zplinalg::{complex_homology, AbGroup, FgModule, SubQuotient, ZpMatrix};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BurnsideError {
    #[error("ghost vector is not in the image of the mark map: {0}")]
    NotInImage(String),
    #[error("precision {requested} exceeds the {available} digits available")]
    Precision { requested: u32, available: u32 },
    #[error(transparent)]
    Padic(#[from] PadicError),
}

/// A value per subspace of `V_s`, with componentwise ring structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GhostVector {
    pub values: Vec<PadicInt>,
}

impl GhostVector {
    pub fn mul(&self, o: &GhostVector) -> GhostVector {
        GhostVector { values: self.values.iter().zip(&o.values).map(|(a, b)| *a * *b).collect() }
    }

    /// Equality at the smaller precision of each pair.
    pub fn approx_eq(&self, o: &GhostVector) -> bool {
        self.values.len() == o.values.len() && self.values.iter().zip(&o.values).all(|(a, b)| (*a - *b).is_zero())
    }
}

/// `sum c_W [V_s / W]` over all subspaces `W`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BurnsideElem {
    pub s: usize,
    pub coeffs: Vec<PadicInt>,
}

impl BurnsideElem {
    pub fn approx_eq(&self, o: &BurnsideElem) -> bool {
        self.s == o.s && self.coeffs.iter().zip(&o.coeffs).all(|(a, b)| (*a - *b).is_zero())
    }

    pub fn add(&self, o: &BurnsideElem) -> BurnsideElem {
        BurnsideElem { s: self.s, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| *a + *b).collect() }
    }
}

/// `A(V_s)` tensored with `Z/p^N`, with the subspace tables it needs.
#[derive(Debug)]
pub struct BurnsideRing {
    pub p: u64,
    pub s: usize,
    pub prec: u32,
    pub lattice: SubspaceLattice,
    products: OnceLock<Vec<Vec<(usize, u32)>>>,
}

impl BurnsideRing {
    pub fn new(p: u64, s: usize, prec: u32) -> Self {
        BurnsideRing { p, s, prec, lattice: SubspaceLattice::new(p, s), products: OnceLock::new() }
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    fn padic(&self, v: i64) -> PadicInt {
        PadicInt::new(self.p, self.prec, v)
    }

    pub fn from_coeffs(&self, c: &[i64]) -> BurnsideElem {
        assert_eq!(c.len(), self.len());
        BurnsideElem { s: self.s, coeffs: c.iter().map(|&x| self.padic(x)).collect() }
    }

    pub fn zero(&self) -> BurnsideElem {
        self.from_coeffs(&vec![0; self.len()])
    }

    /// `1 = [V/V]`.
    pub fn one(&self) -> BurnsideElem {
        self.basis(0)
    }

    /// `[V/W]` for the subspace with index `i`.
    pub fn basis(&self, i: usize) -> BurnsideElem {
        let mut c = vec![0; self.len()];
        c[i] = 1;
        self.from_coeffs(&c)
    }

    pub fn index_of(&self, w: &Subspace) -> usize {
        self.lattice.index_of(w)
    }

    /// The line spanned by the first basis vector, fixed by the Borel.
    pub fn f1(&self) -> usize {
        let mut e = vec![0; self.s];
        e[0] = 1;
        self.index_of(&Subspace::span(self.p, self.s, &[e]))
    }

    /// The line spanned by the second basis vector (`s >= 2`).
    pub fn sigma_f1(&self) -> usize {
        let mut e = vec![0; self.s];
        e[1] = 1;
        self.index_of(&Subspace::span(self.p, self.s, &[e]))
    }

    /// Indices of the lines of `V_s`.
    pub fn lines(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.lattice.dim(i) == 1).collect()
    }

    /// `|[V/W']^W|`: `p^{s - dim W'}` if `W <= W'`, else 0.
    pub fn mark(&self, orbit: usize, w: usize) -> u64 {
        if self.lattice.le(w, orbit) {
            pow_u64(self.p, (self.s - self.lattice.dim(orbit)) as u32)
        } else {
            0
        }
    }

    pub fn marks(&self, x: &BurnsideElem) -> GhostVector {
        let n = self.len();
        let values = (0..n)
            .map(|w| {
                (0..n)
                    .filter(|&o| self.lattice.le(w, o))
                    .fold(self.padic(0), |acc, o| acc + x.coeffs[o] * self.padic(self.mark(o, w) as i64))
            })
            .collect();
        GhostVector { values }
    }

    /// Triangular solve of `marks(x) = g`, largest subspaces first.
    pub fn inverse_marks(&self, g: &GhostVector) -> Result<BurnsideElem, BurnsideError> {
        let n = self.len();
        let mut c: Vec<PadicInt> = Vec::with_capacity(n);
        for w in 0..n {
            let known = (0..w)
                .filter(|&o| self.lattice.le(w, o))
                .fold(self.padic(0), |acc, o| acc + c[o] * self.padic(self.mark(o, w) as i64));
            let k = (self.s - self.lattice.dim(w)) as u32;
            let rest = g.values[w] - known;
            let cw = rest.div_p_pow(k).map_err(|_| {
                BurnsideError::NotInImage(format!("coefficient at {:?} is {rest}, not divisible by p^{k}", self.lattice.subspaces[w].rows))
            })?;
            c.push(cw);
        }
        Ok(BurnsideElem { s: self.s, coeffs: c })
    }

    fn product_table(&self) -> &Vec<Vec<(usize, u32)>> {
        self.products.get_or_init(|| {
            let ws = &self.lattice.subspaces;
            ws.iter()
                .map(|a| {
                    ws.iter()
                        .map(|b| {
                            let meet = self.index_of(&a.intersect(self.p, b));
                            let join = a.sum(self.p, b).dim();
                            (meet, (self.s - join) as u32)
                        })
                        .collect()
                })
                .collect()
        })
    }

    /// Product of orbit combinations: `[V/A][V/B] = p^{s - dim(A+B)} [V/(A cap B)]`.
    pub fn mul(&self, x: &BurnsideElem, y: &BurnsideElem) -> BurnsideElem {
        let t = self.product_table();
        let mut out = vec![self.padic(0); self.len()];
        for (a, ca) in x.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in y.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let (m, e) = t[a][b];
                out[m] = out[m] + *ca * *cb * self.padic(pow_u64(self.p, e) as i64);
            }
        }
        BurnsideElem { s: self.s, coeffs: out }
    }

    /// Right action `X . g = g^{-1} X`: `[V/W] . g = [V / g^{-1} W]`.
    pub fn act(&self, x: &BurnsideElem, g: &FpMat) -> BurnsideElem {
        let ginv = g.inverse(self.p).expect("invertible");
        let mut out = vec![self.padic(0); self.len()];
        for (i, c) in x.coeffs.iter().enumerate() {
            let j = self.index_of(&self.lattice.subspaces[i].image(self.p, &ginv));
            out[j] = out[j] + *c;
        }
        BurnsideElem { s: self.s, coeffs: out }
    }

    /// `(phi . g)(W) = phi(g W)`.
    pub fn ghost_act(&self, phi: &GhostVector, g: &FpMat) -> GhostVector {
        let values = self
            .lattice
            .subspaces
            .iter()
            .map(|w| phi.values[self.index_of(&w.image(self.p, g))])
            .collect();
        GhostVector { values }
    }

    /// For each subspace `W` of `V_{s+1}`, the index of `W cap V_s` (first
    /// coordinates) in `self` and the exponent `c(W) = |G||W cap V_s| / (|W||V_s|)`.
    pub fn norm_data(&self, target: &BurnsideRing) -> Vec<(usize, u64)> {
        assert_eq!(target.s, self.s + 1);
        let p = self.p;
        let h = Subspace::whole(p, self.s).embed_first(p, 1);
        target
            .lattice
            .subspaces
            .iter()
            .map(|w| {
                let meet = w.intersect(p, &h);
                let rows: Vec<Vec<u64>> = meet.rows.iter().map(|r| r[..self.s].to_vec()).collect();
                let inner = Subspace::span(p, self.s, &rows);
                let e = (target.s + meet.dim()) - (w.dim() + self.s);
                (self.index_of(&inner), pow_u64(p, e as u32))
            })
            .collect()
    }

    /// Norm along `V_s -> V_{s+1}` (first coordinates), computed ghostwise.
    pub fn norm_ghost(&self, x: &BurnsideElem, target: &BurnsideRing) -> GhostVector {
        let phi = self.marks(x);
        GhostVector { values: self.norm_data(target).into_iter().map(|(i, c)| phi.values[i].pow(c)).collect() }
    }

    pub fn norm(&self, x: &BurnsideElem, target: &BurnsideRing) -> Result<BurnsideElem, BurnsideError> {
        target.inverse_marks(&self.norm_ghost(x, target))
    }

    /// `phi(X e_s)(W) = (prod_{b, sigma} phi(X)(b sigma W)^{sign sigma})^{1/[GL_s:U_s]}`,
    /// by enumerating the Borel and the permutation matrices.
    pub fn steinberg_ghost(&self, phi: &GhostVector) -> Result<GhostVector, BurnsideError> {
        let p = self.p;
        let bs = borel(p, self.s);
        let perms = permutations(self.s);
        let m = steinberg_index(p, self.s) as i64;
        let mut values = Vec::with_capacity(self.len());
        for w in &self.lattice.subspaces {
            let mut num = PadicInt::one(p, self.prec);
            let mut den = PadicInt::one(p, self.prec);
            for (sigma, sign) in &perms {
                let sw = w.image(p, sigma);
                for b in &bs {
                    let v = phi.values[self.index_of(&sw.image(p, b))];
                    if *sign > 0 {
                        num = num * v;
                    } else {
                        den = den * v;
                    }
                }
            }
            let ratio = num * den.inverse()?;
            values.push(ratio.unit_pow(1, m)?);
        }
        Ok(GhostVector { values })
    }

    pub fn steinberg_mult(&self, x: &BurnsideElem) -> Result<BurnsideElem, BurnsideError> {
        let g = self.steinberg_ghost(&self.marks(x))?;
        self.inverse_marks(&g)
    }

    /// `t(X) = (phi(X)(F_1)^p / prod_{L != F_1} phi(X)(L))^{1/(p+1)}` on `A(V_2)`.
    pub fn t_invariant(&self, x: &BurnsideElem) -> Result<PadicInt, BurnsideError> {
        assert_eq!(self.s, 2);
        let phi = self.marks(x);
        let f1 = self.f1();
        let mut den = PadicInt::one(self.p, self.prec);
        for l in self.lines().into_iter().filter(|&l| l != f1) {
            den = den * phi.values[l];
        }
        let ratio = phi.values[f1].pow(self.p) * den.inverse()?;
        Ok(ratio.unit_pow(1, self.p as i64 + 1)?)
    }

    /// `1 + (t-1)/p x_{F_1} + (t^{-1}-1)/p x_{sigma F_1} + (t-1)(t^{-1}-1)/p^2 y`.
    pub fn e2_closed_form(&self, t: PadicInt) -> Result<BurnsideElem, BurnsideError> {
        assert_eq!(self.s, 2);
        let one = PadicInt::one(self.p, self.prec);
        let tinv = t.inverse()?;
        let mut c = vec![PadicInt::zero(self.p, self.prec); self.len()];
        c[0] = one;
        c[self.f1()] = (t - one).div_p_pow(1)?;
        c[self.sigma_f1()] = (tinv - one).div_p_pow(1)?;
        c[self.len() - 1] = ((t - one) * (tinv - one)).div_p_pow(2)?;
        Ok(BurnsideElem { s: 2, coeffs: c })
    }

    /// Orbit of a subspace under the Borel, by closure under generators.
    fn borel_orbit(&self, w: usize, gens: &[FpMat]) -> Vec<usize> {
        let mut seen: HashSet<usize> = HashSet::from([w]);
        let mut stack = vec![w];
        while let Some(i) = stack.pop() {
            for g in gens {
                let j = self.index_of(&self.lattice.subspaces[i].image(self.p, g));
                if seen.insert(j) {
                    stack.push(j);
                }
            }
        }
        let mut v: Vec<usize> = seen.into_iter().collect();
        v.sort_unstable();
        v
    }

    /// The Steinberg action on logarithmic ghost coordinates, as the linear map
    /// `lambda -> (1/[GL:U]) sum_sigma sign(sigma) |Stab_B| sum_{W'' in B sigma W} lambda(W'')`.
    pub fn steinberg_log_matrix(&self) -> ZpMatrix {
        let p = self.p;
        let n = self.len();
        let gens = borel_generators(p, self.s);
        let border = (p as u128 - 1).pow(self.s as u32) * (p as u128).pow((self.s * self.s.saturating_sub(1) / 2) as u32);
        let inv_m = PadicInt::new(p, self.prec, (steinberg_index(p, self.s) % (1u128 << 62)) as i64)
            .inverse()
            .expect("index prime to p");
        let mut mat = ZpMatrix::zeros(p, self.prec, n, n);
        for w in 0..n {
            for (sigma, sign) in permutations(self.s) {
                let sw = self.index_of(&self.lattice.subspaces[w].image(p, &sigma));
                let orbit = self.borel_orbit(sw, &gens);
                let stab = (border / orbit.len() as u128) as i64;
                let coeff = PadicInt::new(p, self.prec, sign * stab) * inv_m;
                for j in orbit {
                    mat.add_to(w, j, coeff.residue());
                }
            }
        }
        mat
    }

    /// The norm on logarithmic ghost coordinates: `lambda(N X)(W) = c(W) lambda(X)(W cap V_s)`.
    pub fn norm_log_matrix(&self, target: &BurnsideRing) -> ZpMatrix {
        let mut mat = ZpMatrix::zeros(self.p, self.prec, target.len(), self.len());
        for (w, (i, c)) in self.norm_data(target).into_iter().enumerate() {
            mat.add_to(w, i, c % mat.modulus());
        }
        mat
    }
}

impl fmt::Display for BurnsideElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.signed().to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Principal part of the unit group of `A(V_s) (x) Z_p`, as a lattice in
/// logarithmic ghost coordinates (for `p = 2`: sign block, then log block).
#[derive(Clone, Debug)]
pub struct UnitLattice {
    /// Spanning columns, including the sign relations for `p = 2`.
    pub generators: ZpMatrix,
    /// Relations `2 e_i` on the sign block for `p = 2`, empty otherwise.
    pub relations: ZpMatrix,
    /// Whether the span has the index of the full unit group.
    pub certified: bool,
    pub samples: usize,
}

impl BurnsideRing {
    /// Coordinates of a unit ghost vector: logs (odd `p`) or signs and logs (`p = 2`).
    pub fn unit_coords(&self, phi: &GhostVector) -> Result<Vec<u64>, BurnsideError> {
        if self.p == 2 {
            let mut signs = Vec::new();
            let mut logs = Vec::new();
            for v in &phi.values {
                let (neg, u) = crate::padic::two_adic_sign(v)?;
                signs.push(neg as u64);
                logs.push(u.log()?.residue());
            }
            signs.extend(logs);
            Ok(signs)
        } else {
            phi.values.iter().map(|v| Ok(v.log()?.residue())).collect()
        }
    }

    fn coord_dim(&self) -> usize {
        if self.p == 2 {
            2 * self.len()
        } else {
            self.len()
        }
    }

    /// Sign relations for `p = 2`.
    pub fn unit_relations(&self) -> ZpMatrix {
        let n = self.len();
        if self.p == 2 {
            let cols: Vec<Vec<u64>> = (0..n)
                .map(|i| {
                    let mut c = vec![0; 2 * n];
                    c[i] = 2;
                    c
                })
                .collect();
            ZpMatrix::from_columns(2, self.prec, 2 * n, &cols)
        } else {
            ZpMatrix::zeros(self.p, self.prec, n, 0)
        }
    }

    /// `log_p [ (1 + p Z_p)^n : U ]` from the additive index of `phi(A) cap p Z^n`.
    fn unit_index_target(&self) -> u32 {
        // phi(A) cap pZ^n is spanned by phi([V/W]) for W != V and p * 1.
        let n = self.len();
        let cols: Vec<Vec<u64>> = (0..n)
            .map(|o| {
                let scale = if o == 0 { self.p } else { 1 };
                (0..n).map(|w| self.mark(o, w) * scale).collect()
            })
            .collect();
        let m = ZpMatrix::from_columns(self.p, self.prec, n, &cols);
        let v: u32 = m.smith_valuations().iter().sum();
        v - n as u32
    }

    /// Logs of sampled principal units `1 + Y`, `Y in phi^{-1}(p Z^n)`, until
    /// their span has the index of the whole unit group.
    pub fn unit_lattice(&self, seed: u64) -> Result<UnitLattice, BurnsideError> {
        let n = self.len();
        let p = self.p;
        let dim = self.coord_dim();
        let target = self.unit_index_target();
        // Index of the full coordinate lattice: (pZ)^n, or Z^n + (4Z)^n for p = 2.
        let full_val = if p == 2 { 2 * n as u32 } else { n as u32 };
        let rel = self.unit_relations();
        let mut cols: Vec<Vec<u64>> = rel.columns();
        let push_unit = |c: &[i64], cols: &mut Vec<Vec<u64>>| -> Result<(), BurnsideError> {
            let mut coeffs = c.to_vec();
            coeffs[0] += 1;
            let x = self.from_coeffs(&coeffs);
            cols.push(self.unit_coords(&self.marks(&x))?);
            Ok(())
        };
        for o in 0..n {
            let mut c = vec![0i64; n];
            c[o] = if o == 0 { p as i64 } else { 1 };
            push_unit(&c, &mut cols)?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut samples = n;
        let check = |cols: &Vec<Vec<u64>>| -> bool {
            let m = ZpMatrix::from_columns(p, self.prec, dim, cols);
            let d = m.smith_valuations();
            let full_rank = d.iter().all(|&k| k < self.prec) && d.len() == dim;
            full_rank && d.iter().sum::<u32>() - full_val == target
        };
        let mut certified = check(&cols);
        while !certified && samples < 8 * n + 64 {
            for _ in 0..n {
                let c: Vec<i64> = (0..n)
                    .map(|o| {
                        let r = rng.gen_range(0..(p as i64 * p as i64));
                        if o == 0 {
                            p as i64 * r
                        } else {
                            r
                        }
                    })
                    .collect();
                push_unit(&c, &mut cols)?;
                samples += 1;
            }
            certified = check(&cols);
        }
        Ok(UnitLattice { generators: ZpMatrix::from_columns(p, self.prec, dim, &cols), relations: rel, certified, samples })
    }

    /// An operator on ghost-log coordinates, doubled on the sign block for `p = 2`.
    pub fn on_coords(&self, m: &ZpMatrix) -> ZpMatrix {
        if self.p != 2 {
            return m.clone();
        }
        let (r, c) = (m.rows(), m.cols());
        let mut out = ZpMatrix::zeros(2, m.precision(), 2 * r, 2 * c);
        for i in 0..r {
            for j in 0..c {
                out.set(i, j, m.get(i, j));
                out.set(r + i, c + j, m.get(i, j));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    M,
    L,
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "M" | "m" => Ok(Variant::M),
            "L" | "l" => Ok(Variant::L),
            _ => Err(format!("unknown variant {s:?} (expected M or L)")),
        }
    }
}

/// Groups and homology of a complex of unit groups, per `s`.
#[derive(Clone, Debug, Serialize)]
pub struct UnitsReport {
    pub p: u64,
    pub precision: u32,
    pub variant: Variant,
    pub groups: Vec<AbGroup>,
    pub homology: Vec<AbGroup>,
    /// Whether each sampled unit lattice reached the index of the full unit group.
    pub lattices_certified: Vec<bool>,
    /// `d_{s+1} d_s = 0` in each degree.
    pub d_squared_zero: bool,
    /// Notes on how the L-variant groups were obtained.
    pub notes: Vec<String>,
}

/// The M-variant terms `[M(s), gl_1 S^0]` and the maps between them.
pub struct UnitsComplex {
    pub rings: Vec<BurnsideRing>,
    pub terms: Vec<SubQuotient>,
    pub maps: Vec<ZpMatrix>,
    pub certified: Vec<bool>,
}

/// Works at the largest machine-word precision; `prec` must sit below its
/// noise tolerance, and groups are exact modulo `p^prec`.
pub fn units_complex(p: u64, prec: u32, s_max: usize, seed: u64) -> Result<UnitsComplex, BurnsideError> {
    let work = word_precision(p);
    let tol = ZpMatrix::zeros(p, work, 0, 0).tolerance();
    if prec > tol {
        return Err(BurnsideError::Precision { requested: prec, available: tol });
    }
    let prec = work;
    let rings: Vec<BurnsideRing> = (0..=s_max).map(|s| BurnsideRing::new(p, s, prec)).collect();
    let mut terms = Vec::new();
    let mut certified = Vec::new();
    let mut steinberg = Vec::new();
    for (s, r) in rings.iter().enumerate() {
        let lat = r.unit_lattice(seed.wrapping_add(s as u64))?;
        let e = r.on_coords(&r.steinberg_log_matrix());
        let gens = e.mul(&lat.generators).hcat(&lat.relations);
        terms.push(SubQuotient::new(&gens, &lat.relations));
        certified.push(lat.certified);
        steinberg.push(e);
    }
    let mut maps = Vec::new();
    for s in 0..s_max {
        let n = rings[s].on_coords(&rings[s].norm_log_matrix(&rings[s + 1]));
        let d = steinberg[s + 1].mul(&n);
        maps.push(terms[s].map_to(&d, &terms[s + 1]).expect("norm of a Steinberg unit lands in the next term"));
    }
    Ok(UnitsComplex { rings, terms, maps, certified })
}

/// Homology of the complex `[M(s), gl_1 S^0]` (or its `L(s)` summands), `s = 0..=s_max`.
pub fn units_complex_homology(p: u64, prec: u32, variant: Variant, s_max: usize, seed: u64) -> Result<UnitsReport, BurnsideError> {
    let c = units_complex(p, prec, s_max, seed)?;
    let modules: Vec<FgModule> = c.terms.iter().map(|t| t.module.clone()).collect();
    let d_squared_zero = (0..c.maps.len().saturating_sub(1))
        .all(|s| crate::zplinalg::composite_vanishes(&c.maps[s], &c.maps[s + 1], &modules[s + 2]));
    let m_groups: Vec<AbGroup> = modules.iter().map(FgModule::structure).collect();
    match variant {
        Variant::M => Ok(UnitsReport {
            p,
            precision: prec,
            variant,
            homology: complex_homology(&modules, &c.maps),
            groups: m_groups,
            lattices_certified: c.certified,
            d_squared_zero,
            notes: vec![],
        }),
        Variant::L => {
            let (groups, homology, notes) = split_l_variant(&c, &modules, &m_groups);
            Ok(UnitsReport { p, precision: prec, variant, groups, homology, lattices_certified: c.certified, d_squared_zero, notes })
        }
    }
}

/// The `L(s)` complex from `M(s) = L(s) + L(s-1)`: `[L(0)] = [M(0)]`,
/// `[L(1)] = [M(1)] / (inflation of [M(0)])`, and `[L(s)]` for `s >= 2` by
/// cancelling `[L(s-1)]` from `[M(s)]`.
fn split_l_variant(c: &UnitsComplex, modules: &[FgModule], m_groups: &[AbGroup]) -> (Vec<AbGroup>, Vec<AbGroup>, Vec<String>) {
    let p = c.rings[0].p;
    let mut notes = Vec::new();
    let mut groups = vec![m_groups[0].clone()];
    // Inflation along V_1 -> 0 sends a unit a to the constant ghost vector a.
    let r1 = &c.rings[1];
    let infl = {
        let n0 = c.rings[0].len();
        let rows = r1.coord_dim();
        let blocks = rows / r1.len();
        let mut m = ZpMatrix::zeros(p, r1.prec, rows, n0 * blocks);
        for b in 0..blocks {
            for w in 0..r1.len() {
                m.set(b * r1.len() + w, b * n0, 1);
            }
        }
        m
    };
    let infl_coords = c.terms[0].map_to(&infl, &c.terms[1]).expect("constants are Steinberg-fixed in degree 1");
    let l1 = FgModule { gens: modules[1].gens, relations: modules[1].relations.hcat(&infl_coords) };
    groups.push(l1.structure());
    for s in 2..m_groups.len() {
        match m_groups[s].cancel(&groups[s - 1]) {
            Some(g) => groups.push(g),
            None => {
                notes.push(format!("[M({s})] = {} does not contain [L({})] = {} as a summand", m_groups[s], s - 1, groups[s - 1]));
                groups.push(AbGroup::zero(p));
            }
        }
    }
    let mut homology = Vec::new();
    // Only d: L(0) -> L(1) is computed; the rest must vanish for lack of terms.
    let h0 = crate::zplinalg::homology(
        &ZpMatrix::zeros(p, modules[0].relations.precision(), modules[0].gens, 0),
        &modules[0],
        &c.maps[0],
        &l1,
    );
    homology.push(h0);
    let zero = FgModule::free(p, modules[0].relations.precision(), 0);
    let h1 = crate::zplinalg::homology(&c.maps[0], &l1, &ZpMatrix::zeros(p, l1.relations.precision(), 0, l1.gens), &zero);
    homology.push(h1);
    for s in 2..groups.len() {
        if !groups[s].is_zero() {
            notes.push(format!("[L({s})] = {} is nonzero; its maps are not determined and the group is reported as an upper bound", groups[s]));
        }
        homology.push(groups[s].clone());
    }
    (groups, homology, notes)
}

/// `e_s^2 = e_s` in `Z/p^N [GL_s(F_p)]`, by direct convolution.
pub fn steinberg_idempotent_check(s: usize, p: u64, prec: u32) -> bool {
    let q = pow_u64(p, prec);
    let m = PadicInt::new(p, prec, (steinberg_index(p, s) % (1u128 << 62)) as i64);
    let inv = m.inverse().expect("index prime to p").residue();
    let mut e: HashMap<FpMat, u64> = HashMap::new();
    let bs = borel(p, s);
    for (sigma, sign) in permutations(s) {
        for b in &bs {
            let g = b.mul(&sigma, p);
            let c = if sign > 0 { inv } else { (q - inv) % q };
            let entry = e.entry(g).or_insert(0);
            *entry = (*entry + c) % q;
        }
    }
    let mut sq: HashMap<FpMat, u64> = HashMap::new();
    let items: Vec<(&FpMat, &u64)> = e.iter().collect();
    for (g1, c1) in &items {
        for (g2, c2) in &items {
            let g = g1.mul(g2, p);
            let c = ((**c1 as u128 * **c2 as u128) % q as u128) as u64;
            let entry = sq.entry(g).or_insert(0);
            *entry = (*entry + c) % q;
        }
    }
    sq.retain(|_, v| *v != 0);
    e.retain(|_, v| *v != 0);
    sq == e
}

/// The `p = 2` complexes: `(L-variant, M-variant)`.
pub fn p2_units_complex(prec: u32, s_max: usize, seed: u64) -> Result<(UnitsReport, UnitsReport), BurnsideError> {
    Ok((units_complex_homology(2, prec, Variant::L, s_max, seed)?, units_complex_homology(2, prec, Variant::M, s_max, seed)?))
}

/// A random unit `1 + p Y` with `Y` in `A(V_s)` (all marks are principal).
pub fn unit_element(ring: &BurnsideRing, rng: &mut ChaCha8Rng) -> BurnsideElem {
    let p = ring.p as i64;
    let c: Vec<i64> = (0..ring.len()).map(|o| if o == 0 { 1 + p * rng.gen_range(0..p * p) } else { p * rng.gen_range(0..p * p) }).collect();
    ring.from_coeffs(&c)
}
