//! Small linear groups over `F_p`: vectors, matrices, the Borel subgroup of
//! upper-triangular matrices, permutation matrices, and subspaces.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

/// Vector in `F_p^s` encoded as `sum v_i p^i`.
pub fn encode(p: u64, v: &[u64]) -> usize {
    v.iter().rev().fold(0u64, |acc, &x| acc * p + x) as usize
}

pub fn decode(p: u64, s: usize, mut code: usize) -> Vec<u64> {
    let mut v = vec![0; s];
    for x in v.iter_mut() {
        *x = code as u64 % p;
        code /= p as usize;
    }
    v
}

/// Square matrix over `F_p`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpMat {
    pub s: usize,
    pub a: Vec<u64>,
}

impl FpMat {
    pub fn identity(s: usize) -> Self {
        let mut a = vec![0; s * s];
        for i in 0..s {
            a[i * s + i] = 1;
        }
        FpMat { s, a }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.s + j]
    }

    pub fn mul(&self, o: &FpMat, p: u64) -> FpMat {
        let s = self.s;
        let mut a = vec![0; s * s];
        for i in 0..s {
            for j in 0..s {
                a[i * s + j] = (0..s).map(|k| self.get(i, k) * o.get(k, j)).sum::<u64>() % p;
            }
        }
        FpMat { s, a }
    }

    pub fn apply(&self, v: &[u64], p: u64) -> Vec<u64> {
        (0..self.s).map(|i| (0..self.s).map(|k| self.get(i, k) * v[k]).sum::<u64>() % p).collect()
    }

    pub fn transpose(&self) -> FpMat {
        let s = self.s;
        let mut a = vec![0; s * s];
        for i in 0..s {
            for j in 0..s {
                a[j * s + i] = self.get(i, j);
            }
        }
        FpMat { s, a }
    }

    pub fn code(&self, p: u64) -> u64 {
        self.a.iter().fold(0u64, |acc, &x| acc * p + x)
    }

    /// Inverse by Gauss-Jordan; `None` if singular.
    pub fn inverse(&self, p: u64) -> Option<FpMat> {
        let s = self.s;
        let mut m = self.a.clone();
        let mut inv = FpMat::identity(s).a;
        for c in 0..s {
            let r = (c..s).find(|&r| m[r * s + c] != 0)?;
            for j in 0..s {
                m.swap(c * s + j, r * s + j);
                inv.swap(c * s + j, r * s + j);
            }
            let u = inv_fp(m[c * s + c], p);
            for j in 0..s {
                m[c * s + j] = m[c * s + j] * u % p;
                inv[c * s + j] = inv[c * s + j] * u % p;
            }
            for r2 in 0..s {
                if r2 != c && m[r2 * s + c] != 0 {
                    let f = m[r2 * s + c];
                    for j in 0..s {
                        m[r2 * s + j] = (m[r2 * s + j] + p * p - f * m[c * s + j] % p) % p;
                        inv[r2 * s + j] = (inv[r2 * s + j] + p * p - f * inv[c * s + j] % p) % p;
                    }
                }
            }
        }
        Some(FpMat { s, a: inv })
    }
}

pub fn inv_fp(a: u64, p: u64) -> u64 {
    (1..p).find(|&x| a * x % p == 1).expect("nonzero element of F_p")
}

/// All upper-triangular invertible matrices.
pub fn borel(p: u64, s: usize) -> Vec<FpMat> {
    let mut out = vec![FpMat { s, a: vec![0; s * s] }];
    for i in 0..s {
        for j in i..s {
            let range: Vec<u64> = if i == j { (1..p).collect() } else { (0..p).collect() };
            out = out
                .into_iter()
                .flat_map(|m| {
                    range.iter().map(move |&x| {
                        let mut m2 = m.clone();
                        m2.a[i * s + j] = x;
                        m2
                    })
                })
                .collect();
        }
    }
    out
}

/// Permutation matrices with signs; the matrix sends `e_j` to `e_{pi(j)}`.
pub fn permutations(s: usize) -> Vec<(FpMat, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut perms = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; s], &mut perms);
    perms
        .into_iter()
        .map(|pi| {
            let mut a = vec![0; s * s];
            for (j, &i) in pi.iter().enumerate() {
                a[i * s + j] = 1;
            }
            let inversions = (0..s).flat_map(|a| (a + 1..s).map(move |b| (a, b))).filter(|&(a, b)| pi[a] > pi[b]).count();
            (FpMat { s, a }, if inversions % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

/// `|GL_s(F_p)|`.
pub fn gl_order(p: u64, s: usize) -> u128 {
    let ps = (p as u128).pow(s as u32);
    (0..s).map(|i| ps - (p as u128).pow(i as u32)).product()
}

/// `[GL_s : U_s]`, prime to `p`.
pub fn steinberg_index(p: u64, s: usize) -> u128 {
    gl_order(p, s) / (p as u128).pow((s * s.saturating_sub(1) / 2) as u32)
}

/// Generators of the upper-triangular Borel: a primitive diagonal entry in
/// each slot and the elementary matrices `1 + E_{ij}`, `i < j`.
pub fn borel_generators(p: u64, s: usize) -> Vec<FpMat> {
    let g = (2..p).find(|&g| (1..p - 1).all(|k| pow_fp(g, k, p) != 1)).unwrap_or(1);
    let mut out = Vec::new();
    for i in 0..s {
        let mut m = FpMat::identity(s);
        m.a[i * s + i] = g % p;
        if m != FpMat::identity(s) {
            out.push(m);
        }
        for j in (i + 1)..s {
            let mut e = FpMat::identity(s);
            e.a[i * s + j] = 1;
            out.push(e);
        }
    }
    out
}

fn pow_fp(a: u64, e: u64, p: u64) -> u64 {
    (0..e).fold(1, |acc, _| acc * a % p)
}

/// A subspace of `F_p^s` in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subspace {
    pub s: usize,
    /// RREF basis rows.
    pub rows: Vec<Vec<u64>>,
}

impl Subspace {
    pub fn span(p: u64, s: usize, vectors: &[Vec<u64>]) -> Self {
        let mut m: Vec<Vec<u64>> = vectors.iter().map(|v| v.iter().map(|x| x % p).collect()).collect();
        let mut rank = 0;
        for c in 0..s {
            let Some(r) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
            m.swap(rank, r);
            let u = inv_fp(m[rank][c], p);
            for x in m[rank].iter_mut() {
                *x = *x * u % p;
            }
            for r2 in 0..m.len() {
                if r2 != rank && m[r2][c] != 0 {
                    let f = m[r2][c];
                    let pivot = m[rank].clone();
                    for (x, y) in m[r2].iter_mut().zip(&pivot) {
                        *x = (*x + p - f * y % p) % p;
                    }
                }
            }
            rank += 1;
        }
        m.truncate(rank);
        Subspace { s, rows: m }
    }

    pub fn zero(s: usize) -> Self {
        Subspace { s, rows: vec![] }
    }

    pub fn whole(p: u64, s: usize) -> Self {
        let id: Vec<Vec<u64>> = (0..s).map(|i| (0..s).map(|j| (i == j) as u64).collect()).collect();
        Self::span(p, s, &id)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// All `p^dim` vectors.
    pub fn elements(&self, p: u64) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0; self.s]];
        for r in &self.rows {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..p).map(move |c| v.iter().zip(r).map(|(a, b)| (a + c * b) % p).collect::<Vec<u64>>())
                })
                .collect();
        }
        out
    }

    pub fn contains_vec(&self, p: u64, v: &[u64]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        Subspace::span(p, self.s, &rows).dim() == self.dim()
    }

    pub fn contains(&self, p: u64, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains_vec(p, v))
    }

    pub fn sum(&self, p: u64, other: &Subspace) -> Subspace {
        let rows: Vec<Vec<u64>> = self.rows.iter().chain(&other.rows).cloned().collect();
        Subspace::span(p, self.s, &rows)
    }

    pub fn intersect(&self, p: u64, other: &Subspace) -> Subspace {
        let common: Vec<Vec<u64>> = self.elements(p).into_iter().filter(|v| other.contains_vec(p, v)).collect();
        Subspace::span(p, self.s, &common)
    }

    pub fn image(&self, p: u64, g: &FpMat) -> Subspace {
        let rows: Vec<Vec<u64>> = self.rows.iter().map(|v| g.apply(v, p)).collect();
        Subspace::span(p, self.s, &rows)
    }

    /// Embeds `F_p^s` into `F_p^{s+extra}` as the first `s` coordinates.
    pub fn embed_first(&self, p: u64, extra: usize) -> Subspace {
        let rows: Vec<Vec<u64>> =
            self.rows.iter().map(|v| v.iter().copied().chain(std::iter::repeat_n(0, extra)).collect()).collect();
        Subspace::span(p, self.s + extra, &rows)
    }
}

/// Every subspace of `F_p^s`, ordered by decreasing dimension, then RREF.
#[derive(Clone, Debug)]
pub struct SubspaceLattice {
    pub p: u64,
    pub s: usize,
    pub subspaces: Vec<Subspace>,
    index: HashMap<Subspace, usize>,
    /// `contains[i][j]`: subspace `j` lies in subspace `i`.
    contains: Vec<Vec<bool>>,
}

impl SubspaceLattice {
    pub fn new(p: u64, s: usize) -> Self {
        let mut all: BTreeSet<Subspace> = BTreeSet::new();
        all.insert(Subspace::zero(s));
        let vectors: Vec<Vec<u64>> = (0..(p as usize).pow(s as u32)).map(|c| decode(p, s, c)).collect();
        let mut frontier: Vec<Subspace> = vec![Subspace::zero(s)];
        while !frontier.is_empty() {
            let mut next = BTreeSet::new();
            for w in &frontier {
                for v in &vectors {
                    if !w.contains_vec(p, v) {
                        let mut rows = w.rows.clone();
                        rows.push(v.clone());
                        let u = Subspace::span(p, s, &rows);
                        if !all.contains(&u) {
                            next.insert(u);
                        }
                    }
                }
            }
            all.extend(next.iter().cloned());
            frontier = next.into_iter().collect();
        }
        let mut subspaces: Vec<Subspace> = all.into_iter().collect();
        subspaces.sort_by(|a, b| b.dim().cmp(&a.dim()).then(a.cmp(b)));
        let index = subspaces.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let contains =
            subspaces.iter().map(|a| subspaces.iter().map(|b| a.contains(p, b)).collect()).collect();
        SubspaceLattice { p, s, subspaces, index, contains }
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn index_of(&self, w: &Subspace) -> usize {
        self.index[w]
    }

    /// Whether subspace `inner` lies in subspace `outer`.
    pub fn le(&self, inner: usize, outer: usize) -> bool {
        self.contains[outer][inner]
    }

    pub fn dim(&self, i: usize) -> usize {
        self.subspaces[i].dim()
    }
}
