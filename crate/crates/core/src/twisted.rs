//! Localisation of a seed D-torus at the factors `1 + q^a X_k` and
//! `1 + q^b X̃_k`, enough to hold the images of the quantum mutation maps.
//!
//! `X_k` and `X̃_k` commute, so every product of generator images can be
//! written as `q^e E(v) ∏(1 + q^a X_k)^{m_a} ∏(1 + q^b X̃_k)^{n_b}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qtorus::{build_d_torus, mu_prime_images, tilde_x_monomial, x_index, b_index, QTorusElement, SkewLattice, WeylMonomial};
use crate::seed::{sgn, Feed};

/// The torus of a feed together with the distinguished direction `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistContext {
    pub feed: Feed,
    pub k: usize,
    pub lattice: SkewLattice,
    x: Vec<i64>,
    xt: Vec<i64>,
    /// `X̃_k = q^{xt_shift} E(xt)`.
    xt_shift: i64,
}

impl TwistContext {
    pub fn new(feed: &Feed, k: usize) -> Result<Self> {
        let n = feed.n();
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, n });
        }
        let lattice = build_d_torus(feed);
        let x = lattice.basis(x_index(n, k));
        let t = tilde_x_monomial(feed, k);
        Ok(TwistContext {
            feed: feed.clone(),
            k,
            lattice,
            x,
            xt: t.v,
            xt_shift: t.shift,
        })
    }

    /// `X̃_k` and `X_k` are the same monomial, which happens when row `k`
    /// of `ε` vanishes.
    pub fn tilde_is_x(&self) -> bool {
        self.x == self.xt
    }

    /// `2<x_k, v>`: the exponent picked up by `X_k` when moved past `E(v)`.
    pub fn x_commutator(&self, v: &[i64]) -> i64 {
        2 * self.lattice.pair(&self.x, v)
    }

    pub fn xt_commutator(&self, v: &[i64]) -> i64 {
        2 * self.lattice.pair(&self.xt, v)
    }

    pub fn xt_shift(&self) -> i64 {
        self.xt_shift
    }

    fn rank(&self) -> usize {
        self.lattice.rank()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistedMonomial {
    pub shift: i64,
    pub v: Vec<i64>,
    /// `a -> m` for the factor `(1 + q^a X_k)^m`.
    pub x_factors: BTreeMap<i64, i64>,
    /// `b -> m` for the factor `(1 + q^b X̃_k)^m`.
    pub xt_factors: BTreeMap<i64, i64>,
}

fn bump(map: &mut BTreeMap<i64, i64>, key: i64, m: i64) {
    let slot = map.entry(key).or_insert(0);
    *slot += m;
    if *slot == 0 {
        map.remove(&key);
    }
}

impl TwistedMonomial {
    pub fn monomial(ctx: &TwistContext, w: &WeylMonomial) -> Self {
        debug_assert_eq!(w.v.len(), ctx.rank());
        TwistedMonomial {
            shift: w.shift,
            v: w.v.clone(),
            x_factors: BTreeMap::new(),
            xt_factors: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &TwistContext) -> Self {
        TwistedMonomial::monomial(ctx, &WeylMonomial::new(vec![0; ctx.rank()]))
    }

    /// `(1 + q^a X_k)^m`.
    pub fn x_factor(ctx: &TwistContext, a: i64, m: i64) -> Self {
        let mut t = TwistedMonomial::one(ctx);
        bump(&mut t.x_factors, a, m);
        t
    }

    /// `(1 + q^b X̃_k)^m`.
    pub fn xt_factor(ctx: &TwistContext, b: i64, m: i64) -> Self {
        let mut t = TwistedMonomial::one(ctx);
        if ctx.tilde_is_x() {
            bump(&mut t.x_factors, b + ctx.xt_shift, m);
        } else {
            bump(&mut t.xt_factors, b, m);
        }
        t
    }

    pub fn is_pure(&self) -> bool {
        self.x_factors.is_empty() && self.xt_factors.is_empty()
    }

    pub fn is_weyl(&self, w: &WeylMonomial) -> bool {
        self.is_pure() && self.shift == w.shift && self.v == w.v
    }

    /// Move the factors of `self` to the right of `E(w)`.
    fn factors_past(&self, ctx: &TwistContext, w: &[i64]) -> (BTreeMap<i64, i64>, BTreeMap<i64, i64>) {
        // (1 + q^a X) E(w) = E(w) (1 + q^{a + 2<x,w>} X)
        let dx = ctx.x_commutator(w);
        let dt = ctx.xt_commutator(w);
        (
            self.x_factors.iter().map(|(&a, &m)| (a + dx, m)).collect(),
            self.xt_factors.iter().map(|(&b, &m)| (b + dt, m)).collect(),
        )
    }

    pub fn mul(&self, ctx: &TwistContext, other: &TwistedMonomial) -> TwistedMonomial {
        let (mut fx, mut ft) = self.factors_past(ctx, &other.v);
        for (&a, &m) in &other.x_factors {
            bump(&mut fx, a, m);
        }
        for (&b, &m) in &other.xt_factors {
            bump(&mut ft, b, m);
        }
        TwistedMonomial {
            shift: self.shift + other.shift + ctx.lattice.pair(&self.v, &other.v),
            v: self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect(),
            x_factors: fx,
            xt_factors: ft,
        }
    }

    pub fn inverse(&self, ctx: &TwistContext) -> TwistedMonomial {
        // (q^e E(v) F)^{-1} = q^{-e} E(-v) F'^{-1}, F' = F moved past E(-v)
        let neg: Vec<i64> = self.v.iter().map(|a| -a).collect();
        let (fx, ft) = self.factors_past(ctx, &neg);
        TwistedMonomial {
            shift: -self.shift,
            v: neg,
            x_factors: fx.into_iter().map(|(a, m)| (a, -m)).collect(),
            xt_factors: ft.into_iter().map(|(b, m)| (b, -m)).collect(),
        }
    }

    pub fn pow(&self, ctx: &TwistContext, k: i64) -> TwistedMonomial {
        let base = if k < 0 { self.inverse(ctx) } else { self.clone() };
        let mut out = TwistedMonomial::one(ctx);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(ctx, &base);
        }
        out
    }

    pub fn scaled(&self, e: i64) -> TwistedMonomial {
        TwistedMonomial {
            shift: self.shift + e,
            ..self.clone()
        }
    }
}

impl fmt::Display for TwistedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.v.iter().map(ToString::to_string).collect();
        write!(f, "q^({}) E({})", self.shift, vs.join(","))?;
        for (a, m) in &self.x_factors {
            write!(f, " (1+q^({a})X)^{m}")?;
        }
        for (b, m) in &self.xt_factors {
            write!(f, " (1+q^({b})X~)^{m}")?;
        }
        Ok(())
    }
}

/// Integer combination of twisted monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedElement {
    terms: BTreeMap<TwistedMonomial, BigInt>,
}

impl TwistedElement {
    pub fn zero() -> Self {
        TwistedElement { terms: BTreeMap::new() }
    }

    pub fn from_monomial(t: TwistedMonomial) -> Self {
        let mut out = TwistedElement::zero();
        out.add_term(t, BigInt::from(1));
        out
    }

    pub fn add_term(&mut self, t: TwistedMonomial, c: BigInt) {
        let slot = self.terms.entry(t.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TwistedMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_single(&self) -> Option<&TwistedMonomial> {
        match self.terms.iter().next() {
            Some((t, c)) if self.terms.len() == 1 && *c == BigInt::from(1) => Some(t),
            _ => None,
        }
    }

    pub fn mul(&self, ctx: &TwistContext, other: &TwistedElement) -> TwistedElement {
        let mut out = TwistedElement::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(a.mul(ctx, b), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for TwistedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(t, c)| format!("{c}*[{t}]")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Image of the Weyl monomial `E(v)` under the algebra map sending source
/// generator `a` to `images[a]`.
fn map_weyl(source: &SkewLattice, ctx: &TwistContext, images: &[TwistedMonomial], w: &WeylMonomial) -> TwistedMonomial {
    let v = &w.v;
    let mut correction = 0;
    for a in 0..v.len() {
        for b in (a + 1)..v.len() {
            correction += v[a] * v[b] * source.entry(a, b);
        }
    }
    let mut out = TwistedMonomial::one(ctx).scaled(w.shift - correction);
    for (a, &va) in v.iter().enumerate() {
        if va != 0 {
            out = out.mul(ctx, &images[a].pow(ctx, va));
        }
    }
    out
}

/// `μ♯_k` on generators, per the closed forms.
pub fn mu_sharp_images(ctx: &TwistContext) -> Vec<TwistedMonomial> {
    let feed = &ctx.feed;
    let n = feed.n();
    let k = ctx.k;
    let qk = feed.q_exponent(k);
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let b = TwistedMonomial::monomial(ctx, &WeylMonomial::new(ctx.lattice.basis(b_index(n, i))));
        if i == k {
            // B_k (1 + q_k X_k)(1 + q_k X̃_k)^{-1}
            let t = b
                .mul(ctx, &TwistedMonomial::x_factor(ctx, qk, 1))
                .mul(ctx, &TwistedMonomial::xt_factor(ctx, qk - ctx.xt_shift, -1));
            out.push(t);
        } else {
            out.push(b);
        }
    }
    for i in 0..n {
        let mut t = TwistedMonomial::monomial(ctx, &WeylMonomial::new(ctx.lattice.basis(x_index(n, i))));
        let s = sgn(-feed.eps(i, k));
        for r in 1..=feed.eps(i, k).abs() {
            t = t.mul(ctx, &TwistedMonomial::x_factor(ctx, s * (2 * r - 1) * qk, s));
        }
        out.push(t);
    }
    out
}

/// `μ♯_k` on a Weyl monomial of the feed's own torus.
pub fn mu_sharp_monomial(ctx: &TwistContext, w: &WeylMonomial) -> TwistedMonomial {
    map_weyl(&ctx.lattice, ctx, &mu_sharp_images(ctx), w)
}

fn check_cutoff(t: &TwistedMonomial, cutoff: Option<i64>) -> Result<()> {
    let bad = |e: i64| cutoff.is_some_and(|c| e.abs() > c);
    if bad(t.shift) || t.x_factors.keys().chain(t.xt_factors.keys()).any(|&e| bad(e)) {
        return Err(Error::CutoffOverflow(format!("exponent in {t} exceeds cutoff {cutoff:?}")));
    }
    Ok(())
}

/// `μ♯_k` on an element of the feed's torus.
pub fn mu_sharp(feed: &Feed, k: usize, el: &QTorusElement) -> Result<TwistedElement> {
    let ctx = TwistContext::new(feed, k)?;
    if el.rank() != ctx.rank() {
        return Err(Error::Dimension("element rank does not match the feed".into()));
    }
    let images = mu_sharp_images(&ctx);
    let mut out = TwistedElement::zero();
    for (v, c) in el.terms() {
        let t = map_weyl(&ctx.lattice, &ctx, &images, &WeylMonomial::new(v.clone()));
        for (e, coeff) in c.terms() {
            let term = t.scaled(e);
            check_cutoff(&term, c.cutoff())?;
            out.add_term(term, coeff.clone());
        }
    }
    Ok(out)
}

/// Images of the generators of `μ_k(feed)` under `μ_k^q = μ♯_k ∘ μ'_k`.
pub fn mu_quantum_images(ctx: &TwistContext) -> Result<Vec<TwistedMonomial>> {
    let sharp = mu_sharp_images(ctx);
    Ok(mu_prime_images(&ctx.feed, ctx.k)?
        .iter()
        .map(|w| map_weyl(&ctx.lattice, ctx, &sharp, w))
        .collect())
}

/// `1 + q^a · img`, where `img` must be `q^s E(±x)` or `q^s E(±x̃)`.
fn one_plus(ctx: &TwistContext, a: i64, img: &TwistedMonomial) -> Result<TwistedMonomial> {
    if !img.is_pure() {
        return Err(Error::Hypothesis(format!("factor variable maps to a non-monomial {img}")));
    }
    let c = a + img.shift;
    let neg = |v: &[i64]| -> Vec<i64> { v.iter().map(|x| -x).collect() };
    let inv = |dir: &[i64]| TwistedMonomial::monomial(ctx, &WeylMonomial { shift: c, v: dir.to_vec() });
    // 1 + q^c E(-u) = q^c E(-u) (1 + q^{-c} E(u))
    if img.v == ctx.x {
        Ok(TwistedMonomial::x_factor(ctx, c, 1))
    } else if img.v == neg(&ctx.x) {
        Ok(inv(&img.v).mul(ctx, &TwistedMonomial::x_factor(ctx, -c, 1)))
    } else if img.v == ctx.xt {
        Ok(TwistedMonomial::xt_factor(ctx, c - ctx.xt_shift, 1))
    } else if img.v == neg(&ctx.xt) {
        Ok(inv(&img.v).mul(ctx, &TwistedMonomial::xt_factor(ctx, -c - ctx.xt_shift, 1)))
    } else {
        Err(Error::Hypothesis(format!("factor variable maps to {img}, outside the localisation")))
    }
}

/// Apply an algebra map, given on the generators of `src`, to a twisted
/// monomial of `src`.
pub fn apply_map(src: &TwistContext, tgt: &TwistContext, images: &[TwistedMonomial], t: &TwistedMonomial) -> Result<TwistedMonomial> {
    let mut out = map_weyl(&src.lattice, tgt, images, &WeylMonomial { shift: t.shift, v: t.v.clone() });
    let x_img = map_weyl(&src.lattice, tgt, images, &WeylMonomial::new(src.x.clone()));
    let xt_img = map_weyl(&src.lattice, tgt, images, &WeylMonomial { shift: src.xt_shift, v: src.xt.clone() });
    for (&a, &m) in &t.x_factors {
        out = out.mul(tgt, &one_plus(tgt, a, &x_img)?.pow(tgt, m));
    }
    for (&b, &m) in &t.xt_factors {
        out = out.mul(tgt, &one_plus(tgt, b, &xt_img)?.pow(tgt, m));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank1Report {
    pub feed: Feed,
    pub k: usize,
    /// Generators (in `B_1..B_n, X_1..X_n` order) whose round trip is not
    /// exactly themselves, with the computed image.
    pub failures: Vec<(usize, TwistedMonomial)>,
}

impl Rank1Report {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `μ_k^q` at the mutated seed followed by `μ_k^q` at the original one,
/// on every generator.
pub fn check_rank1_quantum(feed: &Feed, k: usize) -> Result<Rank1Report> {
    let primed = feed.mutate(k)?;
    let ctx = TwistContext::new(feed, k)?;
    let ctx_p = TwistContext::new(&primed, k)?;
    // generators of μ_k(primed) = feed, into the primed torus
    let inner = mu_quantum_images(&ctx_p)?;
    // generators of primed, into the feed's torus
    let outer = mu_quantum_images(&ctx)?;
    let mut failures = Vec::new();
    for (g, t) in inner.iter().enumerate() {
        let back = apply_map(&ctx_p, &ctx, &outer, t)?;
        if !back.is_weyl(&WeylMonomial::new(ctx.lattice.basis(g))) {
            failures.push((g, back));
        }
    }
    Ok(Rank1Report {
        feed: feed.clone(),
        k,
        failures,
    })
}

pub fn verify_rank1_quantum(feed: &Feed, k: usize) -> Result<bool> {
    Ok(check_rank1_quantum(feed, k)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlaurent::QLaurent;

    fn a2() -> Feed {
        Feed::skew(vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    #[test]
    fn sharp_on_generators() {
        let f = a2();
        let ctx = TwistContext::new(&f, 0).unwrap();
        let img = mu_sharp_images(&ctx);
        // ε_21 = -1: X_2 (1 + q X_1)
        assert_eq!(img[3].v, vec![0, 0, 0, 1]);
        assert_eq!(img[3].x_factors, BTreeMap::from([(1, 1)]));
        assert!(img[3].xt_factors.is_empty());
        // B_2 fixed, X_1 fixed
        assert!(img[1].is_weyl(&WeylMonomial::new(vec![0, 1, 0, 0])));
        assert!(img[2].is_weyl(&WeylMonomial::new(vec![0, 0, 1, 0])));
        // B_1 (1 + q X_1)(1 + q X̃_1)^{-1}
        assert_eq!(img[0].x_factors, BTreeMap::from([(1, 1)]));
        assert_eq!(img[0].xt_factors, BTreeMap::from([(1, -1)]));
        // ε_12 = 1 at k = 2: X_1 (1 + q^{-1} X_2)^{-1}
        let ctx2 = TwistContext::new(&f, 1).unwrap();
        let img2 = mu_sharp_images(&ctx2);
        assert_eq!(img2[2].x_factors, BTreeMap::from([(-1, -1)]));
    }

    #[test]
    fn sharp_trivial_row() {
        let f = Feed::zero(2);
        let el = QTorusElement::generator(4, 2, Some(10));
        let out = mu_sharp(&f, 1, &el).unwrap();
        assert!(out.as_single().unwrap().is_weyl(&WeylMonomial::new(vec![0, 0, 1, 0])));
    }

    #[test]
    fn sharp_b2_multiplicity() {
        let f = Feed::new(vec![vec![0, 2], vec![-1, 0]], vec![1, 2]).unwrap();
        // ε_12 = 2, q_2 = q^{1/2} = 1 unit: X_1 (1+q_2^{-1} X_2)^{-1}(1+q_2^{-3} X_2)^{-1}
        let ctx = TwistContext::new(&f, 1).unwrap();
        let img = mu_sharp_images(&ctx);
        assert_eq!(img[2].x_factors, BTreeMap::from([(-3, -1), (-1, -1)]));
    }

    #[test]
    fn cutoff_overflow_is_reported() {
        let f = a2();
        let el = QTorusElement::monomial(vec![0, 0, 0, 1], QLaurent::from_terms([(3, 1)], Some(3)));
        assert!(mu_sharp(&f, 0, &el).is_ok());
        let ctx = TwistContext::new(&f, 0).unwrap();
        let t = mu_sharp_monomial(&ctx, &WeylMonomial::new(vec![0, 0, 0, 5]));
        assert!(check_cutoff(&t, Some(3)).is_err());
    }

    #[test]
    fn inverse_and_product() {
        let f = Feed::new(vec![vec![0, 3], vec![-1, 0]], vec![1, 3]).unwrap();
        let ctx = TwistContext::new(&f, 1).unwrap();
        for t in mu_sharp_images(&ctx) {
            let id = t.mul(&ctx, &t.inverse(&ctx));
            assert!(id.is_weyl(&WeylMonomial::new(vec![0; 4])), "{t} -> {id}");
        }
    }

    #[test]
    fn rank1_round_trip() {
        for f in [
            a2(),
            Feed::zero(2),
            Feed::new(vec![vec![0, 2], vec![-1, 0]], vec![1, 2]).unwrap(),
            Feed::new(vec![vec![0, 3], vec![-1, 0]], vec![1, 3]).unwrap(),
            Feed::new(vec![vec![0, 2, -1], vec![-1, 0, 1], vec![1, -2, 0]], vec![1, 2, 1]).unwrap(),
        ] {
            for k in 0..f.n() {
                let r = check_rank1_quantum(&f, k).unwrap();
                assert!(r.holds(), "{f} k={k}: {:?}", r.failures);
            }
        }
    }

    #[test]
    fn rank1_round_trip_random() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let f = Feed::random(&mut rng, 4, 3, 3);
            for k in 0..f.n() {
                let r = check_rank1_quantum(&f, k).unwrap();
                assert!(r.holds(), "{f} k={k}: {:?}", r.failures);
            }
        }
    }
}
