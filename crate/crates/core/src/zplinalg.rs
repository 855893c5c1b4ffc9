//! Matrices over `Z/p^N`, Smith normal form with transforms, and homology of
//! complexes of finitely generated `Z_p`-modules.

use std::fmt;

use serde::Serialize;

use crate::padic::{pow_u64, vp, PadicInt};

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

/// Dense matrix over `Z/p^N`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpMatrix {
    p: u64,
    prec: u32,
    q: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ZpMatrix {
    pub fn zeros(p: u64, prec: u32, rows: usize, cols: usize) -> Self {
        let q = pow_u64(p, prec);
        ZpMatrix { p, prec, q, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, prec: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, prec, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % m.q;
        }
        m
    }

    pub fn from_fn(p: u64, prec: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> PadicInt) -> Self {
        let mut m = Self::zeros(p, prec, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j).residue() % m.q;
            }
        }
        m
    }

    /// Matrix whose columns are the given residue vectors.
    pub fn from_columns(p: u64, prec: u32, rows: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(p, prec, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for i in 0..rows {
                m.data[i * m.cols + j] = c[i] % m.q;
            }
        }
        m
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> PadicInt {
        PadicInt::from_residue(self.p, self.prec, self.get(i, j))
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.q;
    }

    pub fn set_i(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = (v as i128).rem_euclid(self.q as i128) as u64;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: u64) {
        let k = i * self.cols + j;
        self.data[k] = ((self.data[k] as u128 + v as u128) % self.q as u128) as u64;
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul(&self, o: &ZpMatrix) -> ZpMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        assert_eq!(self.p, o.p);
        let prec = self.prec.min(o.prec);
        let mut r = ZpMatrix::zeros(self.p, prec, self.rows, o.cols);
        let q = r.q as u128;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u128;
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j) as u128;
                    if b != 0 {
                        let idx = i * r.cols + j;
                        r.data[idx] = ((r.data[idx] as u128 + a * b) % q) as u64;
                    }
                }
            }
        }
        r
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc: u128 = 0;
                for j in 0..self.cols {
                    acc = (acc + self.get(i, j) as u128 * v[j] as u128) % self.q as u128;
                }
                acc as u64
            })
            .collect()
    }

    pub fn sub(&self, o: &ZpMatrix) -> ZpMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut r = self.clone();
        for (a, b) in r.data.iter_mut().zip(&o.data) {
            *a = (*a + self.q - b % self.q) % self.q;
        }
        r
    }

    pub fn hcat(&self, o: &ZpMatrix) -> ZpMatrix {
        assert_eq!(self.rows, o.rows);
        let cols: Vec<Vec<u64>> = self.columns().into_iter().chain(o.columns()).collect();
        ZpMatrix::from_columns(self.p, self.prec.min(o.prec), self.rows, &cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Entries of valuation at least this are treated as zero: coordinate
    /// changes divide by powers of `p` and leave noise in the top digits.
    pub fn tolerance(&self) -> u32 {
        self.prec - self.prec / 3
    }

    fn val(&self, x: u64) -> u32 {
        match vp(self.p, x) {
            Some(v) if v < self.tolerance() => v,
            _ => self.prec,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row_a += c * row_b
    fn row_axpy(&mut self, a: usize, b: usize, c: u64) {
        if c == 0 {
            return;
        }
        for j in 0..self.cols {
            let x = self.data[b * self.cols + j];
            if x != 0 {
                let k = a * self.cols + j;
                self.data[k] = (self.data[k] + mulmod(c, x, self.q)) % self.q;
            }
        }
    }

    /// col_a += c * col_b
    fn col_axpy(&mut self, a: usize, b: usize, c: u64) {
        if c == 0 {
            return;
        }
        for i in 0..self.rows {
            let x = self.data[i * self.cols + b];
            if x != 0 {
                let k = i * self.cols + a;
                self.data[k] = (self.data[k] + mulmod(c, x, self.q)) % self.q;
            }
        }
    }

    fn scale_row(&mut self, a: usize, c: u64) {
        for j in 0..self.cols {
            let k = a * self.cols + j;
            self.data[k] = mulmod(self.data[k], c, self.q);
        }
    }

    fn scale_col(&mut self, a: usize, c: u64) {
        for i in 0..self.rows {
            let k = i * self.cols + a;
            self.data[k] = mulmod(self.data[k], c, self.q);
        }
    }

    /// Smith normal form `P A Q = D` with `D = diag(p^{k_1}, p^{k_2}, ...)`.
    pub fn smith(&self) -> Smith {
        let (p, prec, q) = (self.p, self.prec, self.q);
        let mut a = self.clone();
        let mut pm = ZpMatrix::identity(p, prec, self.rows);
        let mut pinv = ZpMatrix::identity(p, prec, self.rows);
        let mut qm = ZpMatrix::identity(p, prec, self.cols);
        let mut diag = Vec::new();
        let n = self.rows.min(self.cols);
        for t in 0..n {
            // Pivot of least valuation in the remaining block.
            let mut best: Option<(u32, usize, usize)> = None;
            'search: for i in t..a.rows {
                for j in t..a.cols {
                    let v = a.val(a.get(i, j));
                    if v < prec && best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
            let Some((k, i0, j0)) = best else {
                diag.extend(std::iter::repeat_n(prec, n - t));
                break;
            };
            a.swap_rows(t, i0);
            pm.swap_rows(t, i0);
            pinv.swap_cols(t, i0);
            a.swap_cols(t, j0);
            qm.swap_cols(t, j0);
            let pk = pow_u64(p, k);
            let unit = a.get(t, t) / pk;
            let uinv = invmod(unit, q);
            a.scale_row(t, uinv);
            pm.scale_row(t, uinv);
            pinv.scale_col(t, unit % q);
            for i in (t + 1)..a.rows {
                let x = a.get(i, t);
                if x != 0 {
                    let c = (q - x / pk % q) % q;
                    a.row_axpy(i, t, c);
                    pm.row_axpy(i, t, c);
                    // P^{-1} <- P^{-1} E^{-1}: column t -= c * column i.
                    pinv.col_axpy(t, i, (q - c) % q);
                }
            }
            for j in (t + 1)..a.cols {
                let x = a.get(t, j);
                if x != 0 {
                    let c = (q - x / pk % q) % q;
                    a.col_axpy(j, t, c);
                    qm.col_axpy(j, t, c);
                }
            }
            diag.push(k);
        }
        Smith { p: pm, p_inv: pinv, q: qm, diag, rows: self.rows, cols: self.cols, prec }
    }

    /// Valuations of the Smith diagonal (the precision stands for zero).
    pub fn smith_valuations(&self) -> Vec<u32> {
        self.smith().diag
    }

    /// Columns spanning the kernel over `Z_p`, assuming the true invariant
    /// factors have valuation below the precision.
    pub fn kernel(&self) -> ZpMatrix {
        let s = self.smith();
        let cols: Vec<Vec<u64>> =
            (0..self.cols).filter(|&j| j >= s.diag.len() || s.diag[j] >= self.prec).map(|j| s.q.column(j)).collect();
        ZpMatrix::from_columns(self.p, self.prec, self.cols, &cols)
    }
}

fn invmod(a: u64, q: u64) -> u64 {
    let (mut r0, mut r1) = (q as i128, (a % q) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    assert_eq!(r0, 1, "{a} is not a unit mod {q}");
    t0.rem_euclid(q as i128) as u64
}

/// Result of [`ZpMatrix::smith`].
#[derive(Clone, Debug)]
pub struct Smith {
    pub p: ZpMatrix,
    pub p_inv: ZpMatrix,
    pub q: ZpMatrix,
    /// Valuations of the diagonal; the precision means zero.
    pub diag: Vec<u32>,
    rows: usize,
    cols: usize,
    prec: u32,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|&&k| k < self.prec).count()
    }

    /// Basis of the column span: `P^{-1}` columns scaled by the diagonal.
    pub fn image_basis(&self) -> ZpMatrix {
        let p = self.p.p;
        let cols: Vec<Vec<u64>> = self
            .diag
            .iter()
            .enumerate()
            .filter(|(_, &k)| k < self.prec)
            .map(|(j, &k)| {
                let s = pow_u64(p, k);
                self.p_inv.column(j).into_iter().map(|x| mulmod(x, s, self.p.q)).collect()
            })
            .collect();
        ZpMatrix::from_columns(p, self.prec, self.rows, &cols)
    }

    /// Coordinates of `x` in [`Smith::image_basis`], if `x` lies in the span.
    pub fn coords(&self, x: &[u64]) -> Option<Vec<u64>> {
        let y = self.p.mul_vec(x);
        let p = self.p.p;
        let q = self.p.q;
        let mut out = Vec::new();
        for (i, &yi) in y.iter().enumerate() {
            let k = self.diag.get(i).copied().unwrap_or(self.prec);
            if k >= self.prec {
                if self.p.val(yi) < self.prec {
                    return None;
                }
                continue;
            }
            let v = self.p.val(yi);
            if v < k {
                return None;
            }
            out.push(if v >= self.prec { 0 } else { yi / pow_u64(p, k) % q });
        }
        let _ = self.cols;
        Some(out)
    }
}

/// A finitely generated abelian p-group-or-lattice: `Z_p^free + sum Z/p^{k_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbGroup {
    pub p: u64,
    pub free_rank: usize,
    /// Exponents `k_i >= 1`, ascending.
    pub torsion: Vec<u32>,
}

impl AbGroup {
    pub fn zero(p: u64) -> Self {
        AbGroup { p, free_rank: 0, torsion: vec![] }
    }

    pub fn cyclic(p: u64, k: u32) -> Self {
        AbGroup { p, free_rank: 0, torsion: if k == 0 { vec![] } else { vec![k] } }
    }

    pub fn free(p: u64, r: usize) -> Self {
        AbGroup { p, free_rank: r, torsion: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// `log_p` of the order, `None` when infinite.
    pub fn order_log(&self) -> Option<u32> {
        (self.free_rank == 0).then(|| self.torsion.iter().sum())
    }

    /// Cokernel of a presentation matrix with `n` generators.
    pub fn from_presentation(rel: &ZpMatrix) -> Self {
        let p = rel.prime();
        let s = rel.smith();
        let mut torsion: Vec<u32> = s.diag.iter().copied().filter(|&k| k > 0 && k < rel.precision()).collect();
        torsion.sort_unstable();
        AbGroup { p, free_rank: rel.rows() - s.rank(), torsion }
    }

    /// `G = H + self` solved for `H` by the structure theorem, if possible.
    pub fn cancel(&self, other: &AbGroup) -> Option<AbGroup> {
        if other.free_rank > self.free_rank {
            return None;
        }
        let mut t = self.torsion.clone();
        for k in &other.torsion {
            let pos = t.iter().position(|x| x == k)?;
            t.remove(pos);
        }
        Some(AbGroup { p: self.p, free_rank: self.free_rank - other.free_rank, torsion: t })
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(format!("Z_{}", self.p)),
            r => parts.push(format!("Z_{}^{}", self.p, r)),
        }
        for k in &self.torsion {
            parts.push(format!("Z/{}", pow_u64(self.p, *k)));
        }
        write!(f, "{}", parts.join(" x "))
    }
}

/// `Z_p^n / span(relations)`.
#[derive(Clone, Debug)]
pub struct FgModule {
    pub gens: usize,
    pub relations: ZpMatrix,
}

impl FgModule {
    pub fn free(p: u64, prec: u32, n: usize) -> Self {
        FgModule { gens: n, relations: ZpMatrix::zeros(p, prec, n, 0) }
    }

    pub fn structure(&self) -> AbGroup {
        AbGroup::from_presentation(&self.relations)
    }

    /// Whether the vector is zero in the module.
    pub fn is_zero_elem(&self, x: &[u64]) -> bool {
        if x.iter().all(|&v| self.relations.val(v) >= self.relations.prec) {
            return true;
        }
        self.relations.cols() > 0 && self.relations.smith().coords(x).is_some()
    }
}

/// A subquotient `L / R` of `Z_p^n` with `R <= L`, both given by spanning columns.
#[derive(Clone, Debug)]
pub struct SubQuotient {
    pub ambient: usize,
    pub basis: ZpMatrix,
    solver: Smith,
    pub module: FgModule,
}

impl SubQuotient {
    pub fn new(lattice: &ZpMatrix, relations: &ZpMatrix) -> Self {
        let s = lattice.smith();
        let basis = s.image_basis();
        let solver = basis.smith();
        let rel_cols: Vec<Vec<u64>> = relations
            .columns()
            .iter()
            .map(|c| solver.coords(c).expect("relations must lie in the lattice"))
            .collect();
        let mut rel = ZpMatrix::from_columns(lattice.prime(), lattice.precision(), basis.cols(), &rel_cols);
        if rel_cols.is_empty() {
            rel = ZpMatrix::zeros(lattice.prime(), lattice.precision(), basis.cols(), 0);
        }
        SubQuotient { ambient: lattice.rows(), module: FgModule { gens: basis.cols(), relations: rel }, basis, solver }
    }

    pub fn lattice(lattice: &ZpMatrix) -> Self {
        let z = ZpMatrix::zeros(lattice.prime(), lattice.precision(), lattice.rows(), 0);
        Self::new(lattice, &z)
    }

    pub fn coords(&self, x: &[u64]) -> Option<Vec<u64>> {
        self.solver.coords(x)
    }

    pub fn structure(&self) -> AbGroup {
        self.module.structure()
    }

    /// Matrix of an ambient map `f` from `self` into `target`, in module coordinates.
    pub fn map_to(&self, f: &ZpMatrix, target: &SubQuotient) -> Option<ZpMatrix> {
        let img = f.mul(&self.basis);
        let cols: Option<Vec<Vec<u64>>> = img.columns().iter().map(|c| target.coords(c)).collect();
        let cols = cols?;
        let p = f.prime();
        let prec = f.precision();
        Some(if cols.is_empty() {
            ZpMatrix::zeros(p, prec, target.module.gens, 0)
        } else {
            ZpMatrix::from_columns(p, prec, target.module.gens, &cols)
        })
    }
}

/// Homology at `b` of `a --f--> b --g--> c` for presented modules.
pub fn homology(f: &ZpMatrix, b: &FgModule, g: &ZpMatrix, c: &FgModule) -> AbGroup {
    let p = b.relations.prime();
    let prec = b.relations.precision();
    // ker g = { x : G x in span(R_c) }, as the x-part of ker [G | -R_c].
    let k = if c.gens == 0 {
        ZpMatrix::identity(p, prec, b.gens)
    } else {
        let neg_rc = ZpMatrix::zeros(p, prec, c.gens, c.relations.cols()).sub(&c.relations);
        let big = g.hcat(&neg_rc);
        let ker = big.kernel();
        let cols: Vec<Vec<u64>> = ker.columns().into_iter().map(|v| v[..b.gens].to_vec()).collect();
        ZpMatrix::from_columns(p, prec, b.gens, &cols)
    };
    let kq = if k.cols() == 0 {
        SubQuotient::lattice(&ZpMatrix::zeros(p, prec, b.gens, 0))
    } else {
        SubQuotient::lattice(&k)
    };
    // im f + R_b, in coordinates of ker g.
    let im = f.hcat(&b.relations);
    let cols: Vec<Vec<u64>> = im
        .columns()
        .iter()
        .map(|x| kq.coords(x).expect("image must lie in the kernel (d^2 = 0)"))
        .collect();
    let n = kq.module.gens;
    let rel = if cols.is_empty() { ZpMatrix::zeros(p, prec, n, 0) } else { ZpMatrix::from_columns(p, prec, n, &cols) };
    AbGroup::from_presentation(&rel)
}

/// Homology of `0 -> C_0 -> C_1 -> ... -> C_m -> 0` with `maps[s]: C_s -> C_{s+1}`.
pub fn complex_homology(modules: &[FgModule], maps: &[ZpMatrix]) -> Vec<AbGroup> {
    assert_eq!(maps.len() + 1, modules.len());
    let p = modules[0].relations.prime();
    let prec = modules[0].relations.precision();
    let zero = FgModule::free(p, prec, 0);
    (0..modules.len())
        .map(|s| {
            let f = if s == 0 { ZpMatrix::zeros(p, prec, modules[0].gens, 0) } else { maps[s - 1].clone() };
            let (g, c) = if s + 1 < modules.len() {
                (maps[s].clone(), &modules[s + 1])
            } else {
                (ZpMatrix::zeros(p, prec, 0, modules[s].gens), &zero)
            };
            homology(&f, &modules[s], &g, c)
        })
        .collect()
}

/// Whether `g f` maps every generator into the relations of `c`.
pub fn composite_vanishes(f: &ZpMatrix, g: &ZpMatrix, c: &FgModule) -> bool {
    g.mul(f).columns().iter().all(|x| c.is_zero_elem(x))
}
