//! The mod 2 Dyer-Lashof algebra and its actions on `F2[u]`, `|u| = 2`.
//!
//! Operation indices are topological (`Q^k` raises degree by `k`). Structure
//! constants use the halved index: `Q^{2r} u = eps_r u^{r+1}`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::steenrod::binom_mod2;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DlError {
    #[error("eps_{index} requested but only eps_0..=eps_{cutoff} are stored")]
    BeyondCutoff { index: u64, cutoff: u64 },
    #[error("eps_0 must be 0 and eps_1 must be 1")]
    Anchor,
    #[error("cannot parse structure: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DlMonomial(pub Vec<u64>);

impl DlMonomial {
    pub fn new(indices: Vec<u64>) -> Self {
        DlMonomial(indices)
    }

    pub fn indices(&self) -> &[u64] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().sum()
    }

    /// `i_1 - (i_2 + ... + i_s)`; zero for the empty word.
    pub fn excess(&self) -> i64 {
        match self.0.split_first() {
            None => 0,
            Some((first, rest)) => *first as i64 - rest.iter().sum::<u64>() as i64,
        }
    }

    pub fn is_allowable(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= 2 * w[1])
    }
}

impl fmt::Display for DlMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "Q[{}]", parts.join(","))
    }
}

impl fmt::Debug for DlMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `Q^i Q^j = sum_k C(k-j-1, 2k-i) Q^{i+j-k} Q^k` for `i > 2j`.
pub fn adem_pair(i: u64, j: u64) -> Vec<(u64, u64)> {
    debug_assert!(i > 2 * j);
    let lo = i.div_ceil(2);
    let hi = i - j - 1;
    (lo..=hi)
        .filter(|&k| binom_mod2((k - j - 1) as i64, (2 * k - i) as i64))
        .map(|k| (i + j - k, k))
        .collect()
}

/// Allowable normal form of a word, as a set of monomials (GF(2) sum).
pub fn dl_adem_reduce(word: &[u64]) -> BTreeSet<DlMonomial> {
    let mut out = BTreeSet::new();
    let mut stack = vec![word.to_vec()];
    while let Some(w) = stack.pop() {
        match w.windows(2).position(|p| p[0] > 2 * p[1]) {
            None => {
                let m = DlMonomial(w);
                if !out.remove(&m) {
                    out.insert(m);
                }
            }
            Some(p) => {
                for (a, b) in adem_pair(w[p], w[p + 1]) {
                    let mut v = w.clone();
                    v[p] = a;
                    v[p + 1] = b;
                    stack.push(v);
                }
            }
        }
    }
    out
}

/// Structure constants `eps_0..=eps_cutoff`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EpsilonStructure {
    bits: Vec<bool>,
}

/// Named structures on `F2[u]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Preset {
    /// `eps_r = [r = 1]`.
    Segal,
    /// `eps_r = 1` for `r >= 1`.
    Bllmm,
    /// `eps_r = [r = 2^s - 1]`.
    Thh,
    /// `eps_r = [r odd]`.
    Odd,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Segal, Preset::Bllmm, Preset::Thh, Preset::Odd];

    pub fn value(self, r: u64) -> bool {
        match self {
            Preset::Segal => r == 1,
            Preset::Bllmm => r >= 1,
            Preset::Thh => r >= 1 && (r + 1).is_power_of_two(),
            Preset::Odd => r % 2 == 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Segal => "segal",
            Preset::Bllmm => "bllmm",
            Preset::Thh => "thh",
            Preset::Odd => "odd",
        }
    }
}

impl FromStr for Preset {
    type Err = DlError;

    fn from_str(s: &str) -> Result<Self, DlError> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| DlError::Parse(s.to_string()))
    }
}

impl EpsilonStructure {
    pub fn new(bits: Vec<bool>) -> Result<Self, DlError> {
        if bits.len() < 2 || bits[0] || !bits[1] {
            return Err(DlError::Anchor);
        }
        Ok(EpsilonStructure { bits })
    }

    pub fn preset(p: Preset, cutoff: u64) -> Self {
        EpsilonStructure { bits: (0..=cutoff.max(1)).map(|r| p.value(r)).collect() }
    }

    pub fn cutoff(&self) -> u64 {
        self.bits.len() as u64 - 1
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, r: u64) -> Result<bool, DlError> {
        self.bits.get(r as usize).copied().ok_or(DlError::BeyondCutoff { index: r, cutoff: self.cutoff() })
    }

    /// Same constants on a shorter range.
    pub fn truncate(&self, cutoff: u64) -> Self {
        EpsilonStructure { bits: self.bits[..=(cutoff.min(self.cutoff()) as usize)].to_vec() }
    }

    pub fn matches(&self, p: Preset) -> bool {
        self.bits.iter().enumerate().all(|(r, &b)| b == p.value(r as u64))
    }

    /// Parses `eps=0110...` (bits from `r = 0`) or a preset name with
    /// `name:cutoff` (cutoff defaults to 64).
    pub fn parse(s: &str) -> Result<Self, DlError> {
        if let Some(rest) = s.strip_prefix("eps=") {
            let bits = rest
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(DlError::Parse(s.to_string())),
                })
                .collect::<Result<Vec<_>, _>>()?;
            return EpsilonStructure::new(bits);
        }
        let (name, cutoff) = match s.split_once(':') {
            Some((n, c)) => (n, c.parse::<u64>().map_err(|_| DlError::Parse(s.to_string()))?),
            None => (s, 64),
        };
        Ok(EpsilonStructure::preset(name.parse()?, cutoff))
    }
}

impl fmt::Display for EpsilonStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "eps=")?;
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for EpsilonStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Default)]
struct PathState {
    parity: bool,
    /// Some path with all factors equal to 1 reaches this sum.
    alive: bool,
    /// Some otherwise nonzero path uses a constant past the cutoff.
    unknown: Option<u64>,
}

/// `c` with `Q^{2r}(u^n) = c u^{n+r}`: the parity of compositions
/// `r = r_1 + ... + r_n` weighted by `prod eps_{r_j}`. Only compositions
/// constant on each block of the binary expansion of `n` survive mod 2, so the
/// sum runs over `sum_i a_i 2^i = r` (over bits `2^i` of `n`) of `prod eps_{a_i}`.
pub fn act_on_power(eps: &EpsilonStructure, r: u64, n: u64) -> Result<bool, DlError> {
    if n == 0 {
        return Ok(r == 0);
    }
    let r_us = r as usize;
    let mut state = vec![PathState::default(); r_us + 1];
    state[0] = PathState { parity: true, alive: true, unknown: None };
    let cutoff = eps.cutoff();
    for i in (0..64).filter(|i| n >> i & 1 == 1) {
        let w = 1u64 << i;
        let mut next = vec![PathState::default(); r_us + 1];
        for (s, st) in state.iter().enumerate() {
            if !st.alive && st.unknown.is_none() {
                continue;
            }
            let mut a = 0u64;
            while s as u64 + a * w <= r {
                let t = s + (a * w) as usize;
                if a > cutoff {
                    if st.alive || st.unknown.is_some() {
                        next[t].unknown.get_or_insert(a);
                    }
                } else if eps.bits[a as usize] {
                    next[t].parity ^= st.parity;
                    next[t].alive |= st.alive;
                    if next[t].unknown.is_none() {
                        next[t].unknown = st.unknown;
                    }
                }
                a += 1;
            }
        }
        state = next;
    }
    let end = state[r_us];
    match end.unknown {
        Some(index) => Err(DlError::BeyondCutoff { index, cutoff }),
        None => Ok(end.parity),
    }
}

/// `Q^{i_1} ... Q^{i_s} u^n`, as `Some(exponent)` or `None` for zero.
pub fn act_word(eps: &EpsilonStructure, word: &[u64], n: u64) -> Result<Option<u64>, DlError> {
    let mut e = n;
    for &k in word.iter().rev() {
        if k % 2 == 1 || e == 0 {
            // Odd operations vanish by degree; Q^k 1 = 0 for k > 0.
            if k == 0 && e == 0 {
                continue;
            }
            return Ok(None);
        }
        if !act_on_power(eps, k / 2, e)? {
            return Ok(None);
        }
        e += k / 2;
    }
    Ok(Some(e))
}

/// Sum over a set of words applied to `u^n`; returns the coefficient of the
/// common target power `u^{n + deg/2}`.
pub fn act_sum(eps: &EpsilonStructure, words: &BTreeSet<DlMonomial>, n: u64) -> Result<bool, DlError> {
    let mut c = false;
    for w in words {
        if act_word(eps, w.indices(), n)?.is_some() {
            c = !c;
        }
    }
    Ok(c)
}

/// `c` with `Q^{2r}(du) = c u^r du`, namely `eps_r (r + 1)`.
pub fn kahler_action(eps: &EpsilonStructure, r: u64) -> Result<bool, DlError> {
    Ok(eps.get(r)? && r.is_multiple_of(2))
}

/// Whether `Q^a Q^b u` agrees with the Adem expansion of `(a, b)`; `a > 2b`.
pub fn adem_instance_holds(eps: &EpsilonStructure, a: u64, b: u64) -> Result<bool, DlError> {
    let lhs = act_word(eps, &[a, b], 1)?.is_some();
    let rhs = act_sum(eps, &dl_adem_reduce(&[a, b]), 1)?;
    Ok(lhs == rhs)
}
