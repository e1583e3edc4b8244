//! Truncated Laurent series in `q^(1/N)` with integer coefficients.
//!
//! Exponents are stored in units of `1/N`. A series keeps the window of
//! exponents on which its coefficients are known to be exact; outside that
//! window terms may have been dropped by the cutoff.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QLaurent {
    terms: BTreeMap<i64, BigInt>,
    cutoff: Option<i64>,
    /// Coefficients at exponents `<= exact_hi` are exact. `None` means no
    /// term above was ever dropped.
    exact_hi: Option<i64>,
    exact_lo: Option<i64>,
}

impl QLaurent {
    pub fn zero(cutoff: Option<i64>) -> Self {
        QLaurent {
            terms: BTreeMap::new(),
            cutoff,
            exact_hi: None,
            exact_lo: None,
        }
    }

    pub fn one(cutoff: Option<i64>) -> Self {
        QLaurent::monomial(0, BigInt::one(), cutoff)
    }

    pub fn monomial(e: i64, c: BigInt, cutoff: Option<i64>) -> Self {
        let mut out = QLaurent::zero(cutoff);
        out.add_term(e, c);
        out.enforce_cutoff();
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I, cutoff: Option<i64>) -> Self {
        let mut out = QLaurent::zero(cutoff);
        for (e, c) in terms {
            out.add_term(e, BigInt::from(c));
        }
        out.enforce_cutoff();
        out
    }

    pub fn cutoff(&self) -> Option<i64> {
        self.cutoff
    }

    pub fn exact_hi(&self) -> Option<i64> {
        self.exact_hi
    }

    pub fn exact_lo(&self) -> Option<i64> {
        self.exact_lo
    }

    pub fn is_truncated(&self) -> bool {
        self.exact_hi.is_some() || self.exact_lo.is_some()
    }

    /// Declare that terms above `e` may be missing.
    pub fn mark_inexact_above(&mut self, e: i64) {
        self.exact_hi = Some(self.exact_hi.map_or(e, |h| h.min(e)));
        self.terms.retain(|&k, _| k <= e);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && !self.is_truncated()
    }

    pub fn is_one(&self) -> bool {
        !self.is_truncated() && self.terms.len() == 1 && self.coeff(0).is_one()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn enforce_cutoff(&mut self) {
        let Some(cut) = self.cutoff else { return };
        if self.terms.keys().next_back().is_some_and(|&e| e > cut) {
            self.exact_hi = Some(self.exact_hi.map_or(cut, |h| h.min(cut)));
        }
        if self.terms.keys().next().is_some_and(|&e| e < -cut) {
            self.exact_lo = Some(self.exact_lo.map_or(-cut, |l| l.max(-cut)));
        }
        self.terms.retain(|&e, _| e <= cut && e >= -cut);
    }

    fn merged_cutoff(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    /// Smallest exponent the true series can have, if bounded.
    fn true_lo(&self) -> Option<i64> {
        if self.exact_lo.is_some() {
            return None;
        }
        Some(match (self.min_exponent(), self.exact_hi) {
            (Some(m), _) => m,
            (None, Some(h)) => h + 1,
            (None, None) => i64::MAX / 4,
        })
    }

    fn true_hi(&self) -> Option<i64> {
        if self.exact_hi.is_some() {
            return None;
        }
        Some(match (self.max_exponent(), self.exact_lo) {
            (Some(m), _) => m,
            (None, Some(l)) => l - 1,
            (None, None) => i64::MIN / 4,
        })
    }

    pub fn add(&self, other: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        out.cutoff = Self::merged_cutoff(self.cutoff, other.cutoff);
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        out.exact_hi = min_opt(self.exact_hi, other.exact_hi);
        out.exact_lo = max_opt(self.exact_lo, other.exact_lo);
        out.enforce_cutoff();
        out
    }

    pub fn neg(&self) -> QLaurent {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &QLaurent) -> QLaurent {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero(Self::merged_cutoff(self.cutoff, other.cutoff));
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        // a missing term of one factor above its window meets the lowest
        // term of the other
        let hi = |a: &QLaurent, b: &QLaurent| -> Option<Option<i64>> {
            match a.exact_hi {
                None => Some(None),
                Some(h) => b.true_lo().map(|l| Some(h + l)),
            }
        };
        let lo = |a: &QLaurent, b: &QLaurent| -> Option<Option<i64>> {
            match a.exact_lo {
                None => Some(None),
                Some(l) => b.true_hi().map(|h| Some(l + h)),
            }
        };
        match (hi(self, other), hi(other, self), lo(self, other), lo(other, self)) {
            (Some(a), Some(b), Some(c), Some(d)) => {
                out.exact_hi = min_opt(a, b);
                out.exact_lo = max_opt(c, d);
            }
            _ => {
                // unbounded on both ends: nothing is reliable
                out.exact_hi = Some(i64::MIN / 4);
                out.exact_lo = Some(i64::MAX / 4);
            }
        }
        out.enforce_cutoff();
        out
    }

    /// Multiply by `q^(e/N)`.
    pub fn shift(&self, e: i64) -> QLaurent {
        let mut out = QLaurent {
            terms: self.terms.iter().map(|(&k, c)| (k + e, c.clone())).collect(),
            cutoff: self.cutoff,
            exact_hi: self.exact_hi.map(|h| h + e),
            exact_lo: self.exact_lo.map(|l| l + e),
        };
        out.enforce_cutoff();
        out
    }

    pub fn scale(&self, c: &BigInt) -> QLaurent {
        let mut out = self.clone();
        out.terms.clear();
        for (e, v) in self.terms() {
            out.add_term(e, v * c);
        }
        out
    }

    /// `q^(1/N) -> q^(-1/N)`.
    pub fn invert_q(&self) -> QLaurent {
        QLaurent {
            terms: self.terms.iter().map(|(&k, c)| (-k, c.clone())).collect(),
            cutoff: self.cutoff,
            exact_hi: self.exact_lo.map(|l| -l),
            exact_lo: self.exact_hi.map(|h| -h),
        }
    }

    pub fn in_exact_window(&self, e: i64) -> bool {
        self.exact_hi.is_none_or(|h| e <= h) && self.exact_lo.is_none_or(|l| e >= l)
    }

    /// Compare on the exponents where both sides are exact.
    pub fn compare(&self, other: &QLaurent) -> CoeffComparison {
        let mut cmp = CoeffComparison::default();
        let exps: std::collections::BTreeSet<i64> =
            self.terms.keys().chain(other.terms.keys()).copied().collect();
        for e in exps {
            if !(self.in_exact_window(e) && other.in_exact_window(e)) {
                cmp.excluded += 1;
                continue;
            }
            cmp.compared += 1;
            let (a, b) = (self.coeff(e), other.coeff(e));
            if a != b {
                cmp.mismatches.push((e, a, b));
            }
        }
        cmp
    }

    pub fn format_with(&self, big_n: u64) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&e, c)| {
                let exp = if big_n == 1 { e.to_string() } else { format!("{e}/{big_n}") };
                match e {
                    0 => c.to_string(),
                    _ if c.is_one() => format!("q^({exp})"),
                    _ if (-c).is_one() => format!("-q^({exp})"),
                    _ => format!("{c}*q^({exp})"),
                }
            })
            .collect();
        let mut s = parts.join(" + ").replace("+ -", "- ");
        if self.is_truncated() {
            s.push_str(" + ...");
        }
        s
    }

    pub fn abs_max(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(1))
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn max_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoeffComparison {
    pub compared: usize,
    /// Coefficients skipped because one side may be missing terms there.
    pub excluded: usize,
    pub mismatches: Vec<(i64, BigInt, BigInt)>,
}

impl CoeffComparison {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn absorb(&mut self, other: CoeffComparison) {
        self.compared += other.compared;
        self.excluded += other.excluded;
        self.mismatches.extend(other.mismatches);
    }
}

/// Power series in one commuting variable `z`, truncated at `z^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSeries {
    coeffs: Vec<QLaurent>,
    cutoff: Option<i64>,
}

impl ZSeries {
    pub fn zero(order: usize, cutoff: Option<i64>) -> Self {
        ZSeries {
            coeffs: vec![QLaurent::zero(cutoff); order + 1],
            cutoff,
        }
    }

    pub fn one(order: usize, cutoff: Option<i64>) -> Self {
        let mut s = ZSeries::zero(order, cutoff);
        s.coeffs[0] = QLaurent::one(cutoff);
        s
    }

    /// `1 + q^(e/N) z`.
    pub fn linear(e: i64, order: usize, cutoff: Option<i64>) -> Self {
        let mut s = ZSeries::one(order, cutoff);
        if order >= 1 {
            s.coeffs[1] = QLaurent::monomial(e, BigInt::one(), cutoff);
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<QLaurent>, cutoff: Option<i64>) -> Self {
        ZSeries { coeffs, cutoff }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &QLaurent {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[QLaurent] {
        &self.coeffs
    }

    pub fn mul(&self, other: &ZSeries) -> ZSeries {
        let order = self.order().min(other.order());
        let cutoff = QLaurent::merged_cutoff(self.cutoff, other.cutoff);
        let mut out = ZSeries::zero(order, cutoff);
        for i in 0..=order {
            if self.coeffs[i].is_exact_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                let p = self.coeffs[i].mul(&other.coeffs[j]);
                out.coeffs[i + j] = out.coeffs[i + j].add(&p);
            }
        }
        out
    }

    /// Inverse of a series whose constant term is exactly 1.
    pub fn inverse(&self) -> Option<ZSeries> {
        if !self.coeffs[0].is_one() {
            return None;
        }
        let order = self.order();
        let mut out = ZSeries::one(order, self.cutoff);
        for m in 1..=order {
            let mut acc = QLaurent::zero(self.cutoff);
            for j in 1..=m {
                acc = acc.add(&self.coeffs[j].mul(&out.coeffs[m - j]));
            }
            out.coeffs[m] = acc.neg();
        }
        Some(out)
    }

    /// `z -> q^(e/N) z`.
    pub fn rescale(&self, e: i64) -> ZSeries {
        ZSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(m, c)| c.shift(e * m as i64))
                .collect(),
            cutoff: self.cutoff,
        }
    }

    pub fn pow(&self, k: i64) -> Option<ZSeries> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut out = ZSeries::one(self.order(), self.cutoff);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        Some(out)
    }

    pub fn compare(&self, other: &ZSeries) -> CoeffComparison {
        let mut cmp = CoeffComparison::default();
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            cmp.absorb(a.compare(b));
        }
        cmp
    }
}
