//! Linear combinations of the position and momentum operators `p̂_i`, `q̂_i`
//! and their commutators. The common factor `2π√-1` of every commutator is
//! kept implicit, so brackets are Laurent polynomials in `ℏ`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratmat::{rat, RatMatrix};
use crate::seed::{pos, Feed};

/// Laurent polynomial in `ℏ` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HbarScalar {
    terms: BTreeMap<i32, BigRational>,
}

impl HbarScalar {
    pub fn zero() -> Self {
        HbarScalar::default()
    }

    /// `c · ℏ^e`.
    pub fn monomial(c: BigRational, e: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        HbarScalar { terms }
    }

    pub fn constant(c: BigRational) -> Self {
        HbarScalar::monomial(c, 0)
    }

    pub fn int(c: i64) -> Self {
        HbarScalar::constant(rat(c))
    }

    pub fn hbar() -> Self {
        HbarScalar::monomial(BigRational::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i32) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return HbarScalar::zero();
        }
        HbarScalar {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    fn add_term(&mut self, e: i32, c: BigRational) {
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }
}

impl Add for &HbarScalar {
    type Output = HbarScalar;
    fn add(self, rhs: &HbarScalar) -> HbarScalar {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &HbarScalar {
    type Output = HbarScalar;
    fn sub(self, rhs: &HbarScalar) -> HbarScalar {
        self + &(-rhs)
    }
}

impl Neg for &HbarScalar {
    type Output = HbarScalar;
    fn neg(self) -> HbarScalar {
        HbarScalar {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &HbarScalar {
    type Output = HbarScalar;
    fn mul(self, rhs: &HbarScalar) -> HbarScalar {
        let mut out = HbarScalar::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for HbarScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| match e {
                0 => c.to_string(),
                1 => format!("({c})h"),
                _ => format!("({c})h^{e}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `Σ α_i p̂_i + Σ β_i q̂_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinOp {
    pub p: Vec<HbarScalar>,
    pub q: Vec<HbarScalar>,
}

impl LinOp {
    pub fn zero(n: usize) -> Self {
        LinOp {
            p: vec![HbarScalar::zero(); n],
            q: vec![HbarScalar::zero(); n],
        }
    }

    pub fn p_hat(n: usize, i: usize) -> Self {
        let mut op = LinOp::zero(n);
        op.p[i] = HbarScalar::int(1);
        op
    }

    pub fn q_hat(n: usize, i: usize) -> Self {
        let mut op = LinOp::zero(n);
        op.q[i] = HbarScalar::int(1);
        op
    }

    /// Operator with constant rational coefficients.
    pub fn from_rational(p: &[BigRational], q: &[BigRational]) -> Self {
        LinOp {
            p: p.iter().cloned().map(HbarScalar::constant).collect(),
            q: q.iter().cloned().map(HbarScalar::constant).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn is_zero(&self) -> bool {
        self.p.iter().chain(&self.q).all(HbarScalar::is_zero)
    }

    pub fn scale(&self, c: &HbarScalar) -> Self {
        LinOp {
            p: self.p.iter().map(|a| a * c).collect(),
            q: self.q.iter().map(|b| b * c).collect(),
        }
    }

    pub fn scale_rat(&self, c: &BigRational) -> Self {
        LinOp {
            p: self.p.iter().map(|a| a.scale(c)).collect(),
            q: self.q.iter().map(|b| b.scale(c)).collect(),
        }
    }
}

impl Add for &LinOp {
    type Output = LinOp;
    fn add(self, rhs: &LinOp) -> LinOp {
        LinOp {
            p: self.p.iter().zip(&rhs.p).map(|(a, b)| a + b).collect(),
            q: self.q.iter().zip(&rhs.q).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &LinOp {
    type Output = LinOp;
    fn sub(self, rhs: &LinOp) -> LinOp {
        LinOp {
            p: self.p.iter().zip(&rhs.p).map(|(a, b)| a - b).collect(),
            q: self.q.iter().zip(&rhs.q).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &LinOp {
    type Output = LinOp;
    fn neg(self) -> LinOp {
        LinOp {
            p: self.p.iter().map(|a| -a).collect(),
            q: self.q.iter().map(|b| -b).collect(),
        }
    }
}

impl fmt::Display for LinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, coeffs) in [("p", &self.p), ("q", &self.q)] {
            for (i, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    parts.push(format!("[{c}]{name}{}", i + 1));
                }
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Commutator `[a, b]` in units of `2π√-1`:
/// `ℏ Σ_i (α_i β'_i - α'_i β_i)`.
pub fn bracket(a: &LinOp, b: &LinOp) -> HbarScalar {
    let mut acc = HbarScalar::zero();
    for i in 0..a.n() {
        acc = &acc + &(&(&a.p[i] * &b.q[i]) - &(&b.p[i] * &a.q[i]));
    }
    &acc * &HbarScalar::hbar()
}

pub fn commute_predicate(a: &LinOp, b: &LinOp) -> bool {
    bracket(a, b).is_zero()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Old,
    New,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Old => "old",
            Flavor::New => "new",
        })
    }
}

/// The operators `b̂_i`, `x̂_i`, `x̃̂_i` of one seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub flavor: Flavor,
    pub b: Vec<LinOp>,
    pub x: Vec<LinOp>,
    pub x_tilde: Vec<LinOp>,
}

pub fn build_rep(feed: &Feed, flavor: Flavor) -> Representation {
    let n = feed.n();
    let inv_d = |i: usize| BigRational::new(BigInt::one(), BigInt::from(feed.d_at(i)));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut b = Vec::with_capacity(n);
    let mut x = Vec::with_capacity(n);
    let mut xt = Vec::with_capacity(n);
    for i in 0..n {
        let mut bi = vec![BigRational::zero(); n];
        let mut p = vec![BigRational::zero(); n];
        let mut q = vec![BigRational::zero(); n];
        let mut qt = vec![BigRational::zero(); n];
        match flavor {
            Flavor::Old => {
                bi[i] = rat(2);
                p[i] = &half * inv_d(i);
                for j in 0..n {
                    q[j] = rat(-feed.eps(i, j));
                    qt[j] = rat(feed.eps(i, j));
                }
            }
            Flavor::New => {
                bi[i] = rat(1);
                p[i] = inv_d(i);
                for j in 0..n {
                    q[j] = rat(-pos(feed.eps(i, j)));
                    qt[j] = rat(-pos(-feed.eps(i, j)));
                }
            }
        }
        let zero = vec![BigRational::zero(); n];
        b.push(LinOp::from_rational(&zero, &bi));
        x.push(LinOp::from_rational(&p, &q));
        xt.push(LinOp::from_rational(&p, &qt));
    }
    Representation { flavor, b, x, x_tilde: xt }
}

/// Operators of the Langlands-dual side: `(1/ℏ_i)·op`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckedOps {
    pub b: Vec<LinOp>,
    pub x: Vec<LinOp>,
}

pub fn build_checked(rep: &Representation, feed: &Feed) -> CheckedOps {
    let factor = |i: usize| HbarScalar::monomial(rat(feed.d_at(i) as i64), -1);
    CheckedOps {
        b: rep.b.iter().enumerate().map(|(i, op)| op.scale(&factor(i))).collect(),
        x: rep.x.iter().enumerate().map(|(i, op)| op.scale(&factor(i))).collect(),
    }
}

/// Conjugation `S op S⁻¹` by the linear change of variables `a ↦ a·c`:
/// momentum coefficients become `α c⁻¹`, position coefficients `c β`.
pub fn conjugate_by_matrix(c: &RatMatrix, op: &LinOp) -> Result<LinOp> {
    let n = op.n();
    if c.rows() != n || c.cols() != n {
        return Err(Error::Dimension(format!(
            "{}x{} matrix acting on rank {n}",
            c.rows(),
            c.cols()
        )));
    }
    if !c.is_unimodular() {
        return Err(Error::NotUnimodular(c.to_string()));
    }
    let cinv = c.inverse()?;
    let mut p = vec![HbarScalar::zero(); n];
    let mut q = vec![HbarScalar::zero(); n];
    for i in 0..n {
        for j in 0..n {
            let a = cinv.get(i, j);
            if !a.is_zero() {
                p[j] = &p[j] + &op.p[i].scale(a);
            }
            let b = c.get(j, i);
            if !b.is_zero() {
                q[j] = &q[j] + &op.q[i].scale(b);
            }
        }
    }
    Ok(LinOp { p, q })
}

/// The matrix of the change of variables attached to mutation at `k`:
/// identity except `c_kk = -1` and `c_ik = [-ε_ki]_+` for `i ≠ k`.
pub fn mutation_c(feed: &Feed, k: usize) -> RatMatrix {
    let n = feed.n();
    let mut c = RatMatrix::identity(n);
    c.set(k, k, rat(-1));
    for i in 0..n {
        if i != k {
            c.set(i, k, rat(pos(-feed.eps(k, i))));
        }
    }
    c
}

/// Result of comparing conjugated primed operators against their predicted
/// images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugationCheck {
    /// `(label, index, residual)` for each comparison that failed.
    pub failures: Vec<(String, usize, LinOp)>,
}

impl ConjugationCheck {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn compare(
    out: &mut Vec<(String, usize, LinOp)>,
    label: &str,
    i: usize,
    got: &LinOp,
    want: &LinOp,
) {
    let diff = got - want;
    if !diff.is_zero() {
        out.push((label.to_string(), i, diff));
    }
}

/// `b̂'_i ↦ b̂_i` for `i ≠ k` and `b̂'_k ↦ -b̂_k + Σ_j [-ε_kj]_+ b̂_j`.
pub fn check_b_conjugation(feed: &Feed, k: usize, flavor: Flavor) -> Result<ConjugationCheck> {
    let primed = build_rep(&feed.mutate(k)?, flavor);
    let base = build_rep(feed, flavor);
    let c = mutation_c(feed, k);
    let mut failures = Vec::new();
    for i in 0..feed.n() {
        let got = conjugate_by_matrix(&c, &primed.b[i])?;
        let want = if i == k {
            (0..feed.n()).fold(-&base.b[k], |acc, j| {
                &acc + &base.b[j].scale_rat(&rat(pos(-feed.eps(k, j))))
            })
        } else {
            base.b[i].clone()
        };
        compare(&mut failures, "b", i, &got, &want);
    }
    Ok(ConjugationCheck { failures })
}

pub fn verify_b_conjugation(feed: &Feed, k: usize, flavor: Flavor) -> Result<bool> {
    Ok(check_b_conjugation(feed, k, flavor)?.holds())
}

/// `x̂'_i ↦ x̂_i + [ε_ik]_+ x̂_k`, the same for `x̃̂`, and `x̂'_k ↦ -x̂_k`,
/// `x̃̂'_k ↦ -x̃̂_k`.
pub fn check_x_conjugation(feed: &Feed, k: usize, flavor: Flavor) -> Result<ConjugationCheck> {
    let primed = build_rep(&feed.mutate(k)?, flavor);
    let base = build_rep(feed, flavor);
    let c = mutation_c(feed, k);
    let mut failures = Vec::new();
    for (label, pr, bs) in [
        ("x", &primed.x, &base.x),
        ("x_tilde", &primed.x_tilde, &base.x_tilde),
    ] {
        for i in 0..feed.n() {
            let got = conjugate_by_matrix(&c, &pr[i])?;
            let want = if i == k {
                -&bs[k]
            } else {
                &bs[i] + &bs[k].scale_rat(&rat(pos(feed.eps(i, k))))
            };
            compare(&mut failures, label, i, &got, &want);
        }
    }
    Ok(ConjugationCheck { failures })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XConjugationReport {
    pub old: bool,
    pub new: bool,
    /// Residual of the `x̂'_k ↦ -x̂_k` comparison in the new flavor.
    pub new_failure_witness: Option<LinOp>,
    pub new_failures: Vec<(String, usize, LinOp)>,
}

pub fn verify_x_conjugation(feed: &Feed, k: usize) -> Result<XConjugationReport> {
    let old = check_x_conjugation(feed, k, Flavor::Old)?;
    let new = check_x_conjugation(feed, k, Flavor::New)?;
    let witness = new
        .failures
        .iter()
        .find(|(label, i, _)| label == "x" && *i == k)
        .map(|(_, _, d)| d.clone());
    Ok(XConjugationReport {
        old: old.holds(),
        new: new.holds(),
        new_failure_witness: witness,
        new_failures: new.failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Feed {
        Feed::skew(vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    fn b2() -> Feed {
        Feed::new(vec![vec![0, 2], vec![-1, 0]], vec![1, 2]).unwrap()
    }

    #[test]
    fn bracket_basics() {
        assert_eq!(bracket(&LinOp::p_hat(2, 0), &LinOp::q_hat(2, 0)), HbarScalar::hbar());
        assert!(bracket(&LinOp::p_hat(2, 0), &LinOp::p_hat(2, 0)).is_zero());
        assert!(commute_predicate(&LinOp::p_hat(2, 0), &LinOp::q_hat(2, 1)));
        assert!(!commute_predicate(&LinOp::p_hat(2, 0), &LinOp::q_hat(2, 0)));
    }

    #[test]
    fn old_a2_bracket() {
        let rep = build_rep(&a2(), Flavor::Old);
        assert_eq!(bracket(&rep.x[0], &rep.x[1]), HbarScalar::hbar());
    }

    #[test]
    fn heisenberg_relations_b2() {
        let f = b2();
        for flavor in [Flavor::Old, Flavor::New] {
            let rep = build_rep(&f, flavor);
            for i in 0..2 {
                for j in 0..2 {
                    let want = HbarScalar::monomial(
                        BigRational::new(f.eps(i, j).into(), (f.d_at(j) as i64).into()),
                        1,
                    );
                    assert_eq!(bracket(&rep.x[i], &rep.x[j]), want);
                    let want = if i == j {
                        HbarScalar::monomial(BigRational::new(1.into(), (f.d_at(i) as i64).into()), 1)
                    } else {
                        HbarScalar::zero()
                    };
                    assert_eq!(bracket(&rep.x[i], &rep.b[j]), want);
                    assert!(bracket(&rep.b[i], &rep.b[j]).is_zero());
                }
                let tilde = (0..2).fold(rep.x[i].clone(), |acc, j| {
                    &acc + &rep.b[j].scale_rat(&rat(f.eps(i, j)))
                });
                assert_eq!(tilde, rep.x_tilde[i]);
            }
        }
    }

    #[test]
    fn checked_brackets_are_integral() {
        let f = b2();
        let rep = build_rep(&f, Flavor::Old);
        let chk = build_checked(&rep, &f);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(bracket(&rep.x[i], &chk.x[j]), HbarScalar::int(f.eps(i, j)));
                let delta = if i == j { 1 } else { 0 };
                assert_eq!(bracket(&rep.x[i], &chk.b[j]), HbarScalar::int(delta));
                assert!(bracket(&rep.b[i], &chk.b[j]).is_zero());
            }
        }
    }

    #[test]
    fn conjugation_examples() {
        let id = RatMatrix::identity(2);
        let op = build_rep(&a2(), Flavor::Old).x[0].clone();
        assert_eq!(conjugate_by_matrix(&id, &op).unwrap(), op);
        let flip = RatMatrix::from_i64(&[vec![-1, 0], vec![0, 1]]).unwrap();
        assert_eq!(
            conjugate_by_matrix(&flip, &LinOp::p_hat(2, 0)).unwrap(),
            -&LinOp::p_hat(2, 0)
        );
        let sing = RatMatrix::from_i64(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(conjugate_by_matrix(&sing, &op).is_err());
    }

    #[test]
    fn b_conjugation_both_flavors() {
        for f in [a2(), b2(), Feed::zero(3)] {
            for k in 0..f.n() {
                assert!(verify_b_conjugation(&f, k, Flavor::Old).unwrap());
                assert!(verify_b_conjugation(&f, k, Flavor::New).unwrap());
            }
        }
    }

    #[test]
    fn x_conjugation_dichotomy_a2() {
        let r = verify_x_conjugation(&a2(), 0).unwrap();
        assert!(r.old);
        assert!(!r.new);
        // -|ε_12| q̂_2
        let w = r.new_failure_witness.unwrap();
        assert_eq!(w, LinOp::q_hat(2, 1).scale_rat(&rat(-1)));
        let z = verify_x_conjugation(&Feed::zero(2), 1).unwrap();
        assert!(z.old && z.new);
    }

    #[test]
    fn gaussian_commutes_with_x_k() {
        // c_ii = 1, c_ik = -ε_ki
        let f = a2();
        let g = RatMatrix::from_i64(&[vec![1, 0], vec![-1, 1]]).unwrap();
        let rep = build_rep(&f, Flavor::Old);
        assert_eq!(conjugate_by_matrix(&g, &rep.x[0]).unwrap(), rep.x[0]);
    }
}
