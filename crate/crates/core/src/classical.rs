//! Classical mutation of A-, X- and D-seeds, evaluated exactly at rational
//! points.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::seed::{sgn, Feed, Permutation, SeedKind};

fn rpow(x: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        Pow::pow(x, e as u64)
    } else {
        Pow::pow(&x.recip(), e.unsigned_abs())
    }
}

/// Values of the cluster variables of one seed. D-states hold
/// `B_1..B_n, X_1..X_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointState {
    pub kind: SeedKind,
    pub values: Vec<BigRational>,
}

impl PointState {
    pub fn new(kind: SeedKind, values: Vec<BigRational>) -> Result<Self> {
        if values.iter().any(|v| v <= &BigRational::zero()) {
            return Err(Error::Hypothesis("point values must be positive".into()));
        }
        Ok(PointState { kind, values })
    }

    /// Rank of the underlying feed.
    pub fn rank(&self) -> usize {
        match self.kind {
            SeedKind::D => self.values.len() / 2,
            _ => self.values.len(),
        }
    }

    fn check_rank(&self, feed: &Feed) -> Result<()> {
        if self.rank() != feed.n()
            || (self.kind == SeedKind::D && !self.values.len().is_multiple_of(2))
        {
            return Err(Error::Dimension(format!(
                "{}-state with {} values against a feed of rank {}",
                self.kind,
                self.values.len(),
                feed.n()
            )));
        }
        Ok(())
    }

    /// Positive rationals with numerators and denominators in `1..=1000`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, kind: SeedKind, n: usize) -> Self {
        let count = if kind == SeedKind::D { 2 * n } else { n };
        let values = (0..count)
            .map(|_| {
                let a: u32 = rng.random_range(1..=1000);
                let b: u32 = rng.random_range(1..=1000);
                BigRational::new(BigInt::from(a), BigInt::from(b))
            })
            .collect();
        PointState { kind, values }
    }

    pub fn b_values(&self) -> &[BigRational] {
        &self.values[..self.rank()]
    }

    pub fn x_values(&self) -> &[BigRational] {
        match self.kind {
            SeedKind::D => &self.values[self.rank()..],
            _ => &self.values,
        }
    }
}

/// `A'_k = (∏_{ε_kj>0} A_j^{ε_kj} + ∏_{ε_kj<0} A_j^{-ε_kj}) / A_k`.
pub fn mutate_a(values: &[BigRational], feed: &Feed, k: usize) -> Vec<BigRational> {
    let (plus, minus) = split_monomials(values, feed, k);
    let mut out = values.to_vec();
    out[k] = (plus + minus) / &values[k];
    out
}

fn split_monomials(values: &[BigRational], feed: &Feed, k: usize) -> (BigRational, BigRational) {
    let mut plus = BigRational::one();
    let mut minus = BigRational::one();
    for (j, v) in values.iter().enumerate() {
        let e = feed.eps(k, j);
        if e > 0 {
            plus *= rpow(v, e);
        } else if e < 0 {
            minus *= rpow(v, -e);
        }
    }
    (plus, minus)
}

/// `X'_k = 1/X_k`, `X'_i = X_i (1 + X_k^{sgn(-ε_ik)})^{-ε_ik}`.
pub fn mutate_x(values: &[BigRational], feed: &Feed, k: usize) -> Vec<BigRational> {
    let xk = &values[k];
    values
        .iter()
        .enumerate()
        .map(|(i, xi)| {
            if i == k {
                return xk.recip();
            }
            let e = feed.eps(i, k);
            if e == 0 {
                return xi.clone();
            }
            let base = BigRational::one() + rpow(xk, sgn(-e));
            xi * rpow(&base, -e)
        })
        .collect()
}

/// D-seed mutation on `[B.., X..]`.
pub fn mutate_d(values: &[BigRational], feed: &Feed, k: usize) -> Vec<BigRational> {
    let n = feed.n();
    let (b, x) = values.split_at(n);
    let (plus, minus) = split_monomials(b, feed, k);
    let xk = &x[k];
    let mut new_b = b.to_vec();
    new_b[k] = (minus + xk * plus) / (&b[k] * (BigRational::one() + xk));
    let mut out = new_b;
    out.extend(mutate_x(x, feed, k));
    out
}

/// `X̃_i = X_i ∏_j B_j^{ε_ij}` for a D-state.
pub fn tilde_x(state: &PointState, feed: &Feed) -> Result<Vec<BigRational>> {
    if state.kind != SeedKind::D {
        return Err(Error::Hypothesis("tilde variables need a D-state".into()));
    }
    state.check_rank(feed)?;
    let b = state.b_values();
    Ok(state
        .x_values()
        .iter()
        .enumerate()
        .map(|(i, xi)| {
            b.iter()
                .enumerate()
                .fold(xi.clone(), |acc, (j, bj)| acc * rpow(bj, feed.eps(i, j)))
        })
        .collect())
}

/// `X_i = ∏_j A_j^{ε_ij}`.
pub fn p_pullback(a_values: &[BigRational], feed: &Feed) -> Result<Vec<BigRational>> {
    if a_values.len() != feed.n() {
        return Err(Error::Dimension(format!(
            "{} values for rank {}",
            a_values.len(),
            feed.n()
        )));
    }
    Ok((0..feed.n())
        .map(|i| {
            a_values
                .iter()
                .enumerate()
                .fold(BigRational::one(), |acc, (j, a)| acc * rpow(a, feed.eps(i, j)))
        })
        .collect())
}

pub fn mutate_state(state: &PointState, feed: &Feed, k: usize) -> Result<PointState> {
    state.check_rank(feed)?;
    if k >= feed.n() {
        return Err(Error::IndexOutOfRange { index: k, n: feed.n() });
    }
    let values = match state.kind {
        SeedKind::A => mutate_a(&state.values, feed, k),
        SeedKind::X => mutate_x(&state.values, feed, k),
        SeedKind::D => mutate_d(&state.values, feed, k),
    };
    Ok(PointState { kind: state.kind, values })
}

/// `V'_{σ(i)} = V_i`, applied blockwise for D-states.
pub fn permute_state(state: &PointState, sigma: &Permutation) -> Result<PointState> {
    let n = state.rank();
    if sigma.len() != n {
        return Err(Error::Dimension(format!(
            "permutation of {} letters on a rank-{n} state",
            sigma.len()
        )));
    }
    let mut values = state.values.clone();
    let blocks = state.values.len() / n.max(1);
    for blk in 0..blocks {
        for i in 0..n {
            values[blk * n + sigma.apply(i)] = state.values[blk * n + i].clone();
        }
    }
    Ok(PointState { kind: state.kind, values })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Mutate(usize),
    Permute(Permutation),
}

/// A cluster transformation as a sequence of steps applied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub steps: Vec<Step>,
}

impl Word {
    pub fn new(steps: Vec<Step>) -> Self {
        Word { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Parse `m1 p(1 2) m1 p(1 2 3)(4 5)` for rank `n`. Indices are 1-based.
    pub fn parse(text: &str, n: usize) -> Result<Word> {
        let mut steps = Vec::new();
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let parse_err = |msg: String| Error::Parse(msg);
        while pos < chars.len() {
            let c = chars[pos];
            if c.is_whitespace() {
                pos += 1;
                continue;
            }
            match c {
                'm' => {
                    let start = pos + 1;
                    let mut end = start;
                    while end < chars.len() && chars[end].is_ascii_digit() {
                        end += 1;
                    }
                    let digits: String = chars[start..end].iter().collect();
                    let k: usize = digits
                        .parse()
                        .map_err(|_| parse_err(format!("bad mutation token at column {}", pos + 1)))?;
                    if k == 0 || k > n {
                        return Err(Error::IndexOutOfRange { index: k, n });
                    }
                    steps.push(Step::Mutate(k - 1));
                    pos = end;
                }
                'p' => {
                    pos += 1;
                    if chars.get(pos) != Some(&'(') {
                        return Err(parse_err("permutation token without cycles".into()));
                    }
                    let mut cycles = Vec::new();
                    while pos < chars.len() && chars[pos] == '(' {
                        let close = chars[pos..]
                            .iter()
                            .position(|&ch| ch == ')')
                            .ok_or_else(|| parse_err("unclosed parenthesis".into()))?
                            + pos;
                        let body: String = chars[pos + 1..close].iter().collect();
                        let mut cycle = Vec::new();
                        for tok in body.split(|ch: char| ch.is_whitespace() || ch == ',') {
                            if tok.is_empty() {
                                continue;
                            }
                            let v: usize = tok
                                .parse()
                                .map_err(|_| parse_err(format!("bad cycle entry '{tok}'")))?;
                            if v == 0 || v > n {
                                return Err(Error::IndexOutOfRange { index: v, n });
                            }
                            cycle.push(v - 1);
                        }
                        if !cycle.is_empty() {
                            cycles.push(cycle);
                        }
                        pos = close + 1;
                    }
                    steps.push(Step::Permute(Permutation::from_cycles(n, &cycles)?));
                }
                other => return Err(parse_err(format!("unexpected character '{other}'"))),
            }
        }
        Ok(Word { steps })
    }

    /// `(P_(ij) ∘ μ_i)^reps`.
    pub fn polygon(n: usize, i: usize, j: usize, reps: usize) -> Result<Word> {
        let swap = Permutation::transposition(n, i, j)?;
        let mut steps = Vec::with_capacity(2 * reps);
        for _ in 0..reps {
            steps.push(Step::Mutate(i));
            steps.push(Step::Permute(swap.clone()));
        }
        Ok(Word { steps })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| match s {
                Step::Mutate(k) => format!("m{}", k + 1),
                Step::Permute(p) => format!("p{p}"),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn apply_word_to_feed(feed: &Feed, word: &Word) -> Result<Feed> {
    let mut f = feed.clone();
    for step in &word.steps {
        f = match step {
            Step::Mutate(k) => f.mutate(*k)?,
            Step::Permute(s) => f.permute(s)?,
        };
    }
    Ok(f)
}

/// Apply `word` left to right; each mutation uses the current feed.
pub fn apply_word(state: &PointState, feed: &Feed, word: &Word) -> Result<(PointState, Feed)> {
    let mut s = state.clone();
    let mut f = feed.clone();
    for step in &word.steps {
        match step {
            Step::Mutate(k) => {
                s = mutate_state(&s, &f, *k)?;
                f = f.mutate(*k)?;
            }
            Step::Permute(sigma) => {
                s = permute_state(&s, sigma)?;
                f = f.permute(sigma)?;
            }
        }
    }
    Ok((s, f))
}

/// True iff `word` returns the feed and every sampled point to itself.
pub fn is_trivial_at_points<R: Rng + ?Sized>(
    feed: &Feed,
    word: &Word,
    kind: SeedKind,
    samples: usize,
    rng: &mut R,
) -> Result<bool> {
    if apply_word_to_feed(feed, word)? != *feed {
        return Ok(false);
    }
    for _ in 0..samples {
        let p = PointState::random(rng, kind, feed.n());
        let (q, _) = apply_word(&p, feed, word)?;
        if q != p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Check that `(P_(ij) ∘ μ_i)^{h+2}` acts trivially.
pub fn verify_h_plus_2_gon<R: Rng + ?Sized>(
    feed: &Feed,
    i: usize,
    j: usize,
    kind: SeedKind,
    samples: usize,
    rng: &mut R,
) -> Result<bool> {
    let t = feed.rank2_classify(i, j)?.ok_or_else(|| {
        Error::Hypothesis(format!(
            "pair ({}, {}) is not of finite rank-2 type",
            i + 1,
            j + 1
        ))
    })?;
    let word = Word::polygon(feed.n(), i, j, t.h() + 2)?;
    is_trivial_at_points(feed, &word, kind, samples, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&a| r(a, 1)).collect()
    }

    fn a2() -> Feed {
        Feed::skew(vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn mutate_a_examples() {
        let zero = Feed::zero(2);
        assert_eq!(mutate_a(&ints(&[3, 7]), &zero, 0)[0], r(2, 3));
        assert_eq!(mutate_a(&ints(&[2, 3]), &a2(), 0), vec![r(2, 1), r(3, 1)]);
    }

    #[test]
    fn mutate_x_examples() {
        assert_eq!(mutate_x(&ints(&[2, 3]), &a2(), 0), vec![r(1, 2), r(9, 1)]);
        assert_eq!(mutate_x(&ints(&[2, 3]), &Feed::zero(2), 0)[1], r(3, 1));
    }

    #[test]
    fn mutate_d_examples() {
        let out = mutate_d(&ints(&[5, 1]), &Feed::zero(1), 0);
        assert_eq!(out, vec![r(1, 5), r(1, 1)]);
    }

    #[test]
    fn tilde_and_pullback_examples() {
        let s = PointState::new(SeedKind::D, ints(&[2, 3, 1, 1])).unwrap();
        assert_eq!(tilde_x(&s, &a2()).unwrap(), vec![r(3, 1), r(1, 2)]);
        let s = PointState::new(SeedKind::D, ints(&[1, 1, 4, 5])).unwrap();
        assert_eq!(tilde_x(&s, &a2()).unwrap(), ints(&[4, 5]));
        assert_eq!(p_pullback(&ints(&[2, 3]), &a2()).unwrap(), vec![r(3, 1), r(1, 2)]);
        assert_eq!(p_pullback(&ints(&[1, 1]), &a2()).unwrap(), ints(&[1, 1]));
    }

    #[test]
    fn word_parse_roundtrip() {
        let w = Word::parse("m1 p(1 2) m1", 2).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.to_string(), "m1 p(1 2) m1");
        let w = Word::parse("p(1 3)(2 4) m4", 4).unwrap();
        assert_eq!(w.to_string(), "p(1 3)(2 4) m4");
        assert!(Word::parse("m3", 2).is_err());
        assert!(Word::parse("m0", 2).is_err());
        assert!(Word::parse("x1", 2).is_err());
        assert!(Word::parse("p(1 2", 2).is_err());
        assert!(Word::parse("", 2).unwrap().is_empty());
    }

    #[test]
    fn polygon_a2() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = Word::polygon(2, 0, 1, 5).unwrap();
        assert!(is_trivial_at_points(&a2(), &w, SeedKind::A, 10, &mut rng).unwrap());
        let short = Word::polygon(2, 0, 1, 4).unwrap();
        assert!(!is_trivial_at_points(&a2(), &short, SeedKind::X, 3, &mut rng).unwrap());
    }

    #[test]
    fn polygon_rejects_infinite_type() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = Feed::skew(vec![vec![0, 2], vec![-2, 0]]).unwrap();
        assert!(verify_h_plus_2_gon(&f, 0, 1, SeedKind::A, 1, &mut rng).is_err());
    }
}
