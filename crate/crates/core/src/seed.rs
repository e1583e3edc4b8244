//! Exchange matrices, skew-symmetrizers and the combinatorics of feeds.
//!
//! Indices are 0-based throughout the library; the text formats used by the
//! CLI and word parser are 1-based.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `[a]_+`
pub fn pos(a: i64) -> i64 {
    a.max(0)
}

/// Sign with the convention `sgn(0) = 1`.
pub fn sgn(a: i64) -> i64 {
    if a >= 0 {
        1
    } else {
        -1
    }
}

/// True iff `epsilon[i][j] / d[j] == -epsilon[j][i] / d[i]` for all pairs.
pub fn check_skew_symmetrizable(epsilon: &[Vec<i64>], d: &[u64]) -> Result<bool> {
    let n = epsilon.len();
    if d.len() != n {
        return Err(Error::Dimension(format!(
            "epsilon has {n} rows but d has {} entries",
            d.len()
        )));
    }
    for (i, row) in epsilon.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Dimension(format!(
                "row {i} has length {}, expected {n}",
                row.len()
            )));
        }
    }
    if d.contains(&0) {
        return Err(Error::InvalidSymmetrizer("entries must be positive".into()));
    }
    for i in 0..n {
        for j in 0..n {
            // cross-multiplied form of the rational identity
            let lhs = epsilon[i][j] as i128 * d[i] as i128;
            let rhs = -(epsilon[j][i] as i128) * d[j] as i128;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Matrix mutation at `k`, independent of the symmetrizer.
pub fn mutate_matrix(epsilon: &[Vec<i64>], k: usize) -> Vec<Vec<i64>> {
    let n = epsilon.len();
    let mut out = epsilon.to_vec();
    for i in 0..n {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -epsilon[i][j]
            } else {
                let (eik, ekj) = (epsilon[i][k], epsilon[k][j]);
                epsilon[i][j] + (eik.abs() * ekj + eik * ekj.abs()) / 2
            };
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeedKind {
    A,
    X,
    D,
}

impl fmt::Display for SeedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SeedKind::A => "A",
            SeedKind::X => "X",
            SeedKind::D => "D",
        };
        f.write_str(s)
    }
}

/// A permutation of `0..n`, stored as the list of images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange { index: i.max(j), n });
        }
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i, j);
        Ok(Permutation(v))
    }

    /// Build from disjoint cycles over `0..n`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut v: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for c in cycles {
            for (pos_in_cycle, &a) in c.iter().enumerate() {
                if a >= n {
                    return Err(Error::IndexOutOfRange { index: a, n });
                }
                if touched[a] {
                    return Err(Error::InvalidPermutation(format!(
                        "index {} repeated in cycles",
                        a + 1
                    )));
                }
                touched[a] = true;
                v[a] = c[(pos_in_cycle + 1) % c.len()];
            }
        }
        Permutation::new(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut v = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            v[x] = i;
        }
        Permutation(v)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    /// Disjoint cycles of length ≥ 2, 0-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] || self.0[s] == s {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.0[s];
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.0[x];
            }
            out.push(c);
        }
        out
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut v: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(v.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| v[i - 1] < v[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| v[j] > v[i - 1]).unwrap();
            v.swap(i - 1, j);
            v[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// Rank-2 Dynkin types of a pair of indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rank2Type {
    A1xA1,
    A2,
    B2,
    G2,
}

impl Rank2Type {
    pub fn p(self) -> i64 {
        match self {
            Rank2Type::A1xA1 => 0,
            Rank2Type::A2 => 1,
            Rank2Type::B2 => 2,
            Rank2Type::G2 => 3,
        }
    }

    /// The `h` of the `(h+2)`-gon relation.
    pub fn h(self) -> usize {
        match self {
            Rank2Type::A1xA1 => 2,
            Rank2Type::A2 => 3,
            Rank2Type::B2 => 4,
            Rank2Type::G2 => 6,
        }
    }

    pub fn from_p(p: i64) -> Option<Self> {
        match p {
            0 => Some(Rank2Type::A1xA1),
            1 => Some(Rank2Type::A2),
            2 => Some(Rank2Type::B2),
            3 => Some(Rank2Type::G2),
            _ => None,
        }
    }

    pub const ALL: [Rank2Type; 4] = [
        Rank2Type::A1xA1,
        Rank2Type::A2,
        Rank2Type::B2,
        Rank2Type::G2,
    ];
}

impl fmt::Display for Rank2Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rank2Type::A1xA1 => "A1xA1",
            Rank2Type::A2 => "A2",
            Rank2Type::B2 => "B2",
            Rank2Type::G2 => "G2",
        };
        f.write_str(s)
    }
}

/// Exchange matrix together with its skew-symmetrizer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Feed {
    epsilon: Vec<Vec<i64>>,
    d: Vec<u64>,
}

impl Feed {
    pub fn new(epsilon: Vec<Vec<i64>>, d: Vec<u64>) -> Result<Self> {
        if epsilon.is_empty() {
            return Err(Error::Dimension("rank must be positive".into()));
        }
        if !check_skew_symmetrizable(&epsilon, &d)? {
            return Err(Error::NotSkewSymmetrizable(format!(
                "epsilon = {epsilon:?}, d = {d:?}"
            )));
        }
        Ok(Feed { epsilon, d })
    }

    /// Skew-symmetric matrix with `d = (1, …, 1)`.
    pub fn skew(epsilon: Vec<Vec<i64>>) -> Result<Self> {
        let n = epsilon.len();
        Feed::new(epsilon, vec![1; n])
    }

    pub fn zero(n: usize) -> Self {
        Feed {
            epsilon: vec![vec![0; n]; n],
            d: vec![1; n],
        }
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn epsilon(&self) -> &[Vec<i64>] {
        &self.epsilon
    }

    pub fn eps(&self, i: usize, j: usize) -> i64 {
        self.epsilon[i][j]
    }

    pub fn d(&self) -> &[u64] {
        &self.d
    }

    pub fn d_at(&self, i: usize) -> u64 {
        self.d[i]
    }

    /// `N = lcm(d_1, …, d_n)`.
    pub fn big_n(&self) -> u64 {
        self.d.iter().fold(1u64, |acc, &x| acc.lcm(&x))
    }

    /// Exponent of `q^{1/N}` representing `q_i = q^{1/d_i}`.
    pub fn q_exponent(&self, i: usize) -> i64 {
        (self.big_n() / self.d[i]) as i64
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.n() {
            return Err(Error::IndexOutOfRange { index: k, n: self.n() });
        }
        Ok(())
    }

    pub fn mutate(&self, k: usize) -> Result<Feed> {
        self.check_index(k)?;
        Ok(Feed {
            epsilon: mutate_matrix(&self.epsilon, k),
            d: self.d.clone(),
        })
    }

    /// True iff mutating twice at `k` returns this feed.
    pub fn mutate_involutive_check(&self, k: usize) -> Result<bool> {
        Ok(&self.mutate(k)?.mutate(k)? == self)
    }

    /// `d'_{σ(i)} = d_i`, `ε'_{σ(i)σ(j)} = ε_ij`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Feed> {
        let n = self.n();
        if sigma.len() != n {
            return Err(Error::Dimension(format!(
                "permutation of {} letters applied to rank {n}",
                sigma.len()
            )));
        }
        let mut eps = vec![vec![0; n]; n];
        let mut d = vec![0; n];
        for i in 0..n {
            d[sigma.apply(i)] = self.d[i];
            for j in 0..n {
                eps[sigma.apply(i)][sigma.apply(j)] = self.epsilon[i][j];
            }
        }
        Ok(Feed { epsilon: eps, d })
    }

    pub fn langlands_dual(&self) -> LanglandsDual {
        let n = self.n();
        let epsilon = (0..n)
            .map(|i| (0..n).map(|j| -self.epsilon[j][i]).collect())
            .collect();
        let d = self.d.iter().map(|&x| Ratio::new(1, x as i64)).collect();
        LanglandsDual { epsilon, d }
    }

    /// Classify the pair `(i, j)`; `None` if it is not of finite rank-2 type.
    pub fn rank2_classify(&self, i: usize, j: usize) -> Result<Option<Rank2Type>> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Ok(None);
        }
        let (eij, eji) = (self.epsilon[i][j], self.epsilon[j][i]);
        if eij == 0 && eji == 0 {
            return Ok(Some(Rank2Type::A1xA1));
        }
        let p = eij.abs();
        if (1..=3).contains(&p) && eij == -p * eji {
            return Ok(Rank2Type::from_p(p));
        }
        Ok(None)
    }

    /// Random skew-symmetrizable feed with `d_i ∈ {1, …, max_d}` and entries
    /// of modulus at most `max_entry` (before scaling by the symmetrizer).
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, max_d: u64, max_entry: i64) -> Feed {
        let d: Vec<u64> = (0..n).map(|_| rng.random_range(1..=max_d)).collect();
        let mut eps = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let m = rng.random_range(-max_entry..=max_entry);
                let g = d[i].gcd(&d[j]);
                eps[i][j] = m * (d[j] / g) as i64;
                eps[j][i] = -m * (d[i] / g) as i64;
            }
        }
        Feed { epsilon: eps, d }
    }
}

impl fmt::Display for Feed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "epsilon={:?} d={:?}", self.epsilon, self.d)
    }
}

/// Dual exchange data: integer matrix, rational symmetrizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanglandsDual {
    pub epsilon: Vec<Vec<i64>>,
    pub d: Vec<Ratio<i64>>,
}

impl LanglandsDual {
    pub fn mutate(&self, k: usize) -> LanglandsDual {
        LanglandsDual {
            epsilon: mutate_matrix(&self.epsilon, k),
            d: self.d.clone(),
        }
    }

    /// Dualize again; returns the original feed when the symmetrizer inverts
    /// back to integers.
    pub fn dual(&self) -> Result<Feed> {
        let n = self.epsilon.len();
        let epsilon = (0..n)
            .map(|i| (0..n).map(|j| -self.epsilon[j][i]).collect())
            .collect();
        let mut d = Vec::with_capacity(n);
        for x in &self.d {
            let inv = x.recip();
            if !inv.is_integer() || *inv.numer() <= 0 {
                return Err(Error::InvalidSymmetrizer(format!("1/{x} is not a positive integer")));
            }
            d.push(*inv.numer() as u64);
        }
        Feed::new(epsilon, d)
    }

    /// Check `ε^∨_ij / d^∨_j = -ε^∨_ji / d^∨_i`.
    pub fn is_skew_symmetrizable(&self) -> bool {
        let n = self.epsilon.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                Ratio::from_integer(self.epsilon[i][j]) / self.d[j]
                    == -Ratio::from_integer(self.epsilon[j][i]) / self.d[i]
            })
        })
    }
}

/// A feed decorated with variable labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    pub feed: Feed,
    pub kind: SeedKind,
    pub labels: Vec<String>,
}

impl Seed {
    pub fn new(feed: Feed, kind: SeedKind, labels: Vec<String>) -> Result<Self> {
        let expected = match kind {
            SeedKind::A | SeedKind::X => feed.n(),
            SeedKind::D => 2 * feed.n(),
        };
        if labels.len() != expected {
            return Err(Error::Dimension(format!(
                "{kind}-seed of rank {} needs {expected} labels, got {}",
                feed.n(),
                labels.len()
            )));
        }
        Ok(Seed { feed, kind, labels })
    }

    /// Default labels `A1…An`, `X1…Xn`, or `B1…Bn X1…Xn`.
    pub fn with_default_labels(feed: Feed, kind: SeedKind) -> Self {
        let n = feed.n();
        let labels = match kind {
            SeedKind::A => (1..=n).map(|i| format!("A{i}")).collect(),
            SeedKind::X => (1..=n).map(|i| format!("X{i}")).collect(),
            SeedKind::D => (1..=n)
                .map(|i| format!("B{i}"))
                .chain((1..=n).map(|i| format!("X{i}")))
                .collect(),
        };
        Seed { feed, kind, labels }
    }
}
