//! Quantum torus algebras in the Weyl-normalised monomial basis
//! `E(v)E(w) = q^<v,w> E(v+w)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::qlaurent::{CoeffComparison, QLaurent};
use crate::seed::{pos, Feed};

/// Lattice with a skew form. Form values are stored in units of `1/N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewLattice {
    form: Vec<Vec<i64>>,
    big_n: u64,
}

impl SkewLattice {
    pub fn new(form: Vec<Vec<i64>>, big_n: u64) -> Result<Self> {
        let m = form.len();
        if big_n == 0 || form.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension("skew form must be square with N > 0".into()));
        }
        for a in 0..m {
            for b in 0..m {
                if form[a][b] != -form[b][a] {
                    return Err(Error::NotSkewSymmetrizable(format!(
                        "form is not skew at ({}, {})",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(SkewLattice { form, big_n })
    }

    /// `<(a,b),(a',b')> = ab' - a'b`, in units of `q`.
    pub fn rank2_heisenberg() -> Self {
        SkewLattice {
            form: vec![vec![0, 1], vec![-1, 0]],
            big_n: 1,
        }
    }

    pub fn rank(&self) -> usize {
        self.form.len()
    }

    pub fn big_n(&self) -> u64 {
        self.big_n
    }

    pub fn entry(&self, a: usize, b: usize) -> i64 {
        self.form[a][b]
    }

    pub fn pair(&self, v: &[i64], w: &[i64]) -> i64 {
        let mut s = 0;
        for (a, &va) in v.iter().enumerate() {
            if va == 0 {
                continue;
            }
            for (b, &wb) in w.iter().enumerate() {
                s += va * wb * self.form[a][b];
            }
        }
        s
    }

    pub fn basis(&self, a: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        v[a] = 1;
        v
    }
}

/// Index of `B_i` and `X_i` in the rank `2n` lattice of a feed.
pub fn b_index(_n: usize, i: usize) -> usize {
    i
}

pub fn x_index(n: usize, i: usize) -> usize {
    n + i
}

/// Skew form of the seed D-torus, basis `B_1..B_n, X_1..X_n`:
/// `<X_i,X_j> = ε_ij/d_j`, `<X_i,B_i> = 1/d_i`, all `B` pairings zero.
pub fn build_d_torus(feed: &Feed) -> SkewLattice {
    let n = feed.n();
    let mut form = vec![vec![0i64; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            form[x_index(n, i)][x_index(n, j)] = feed.eps(i, j) * feed.q_exponent(j);
        }
        let v = feed.q_exponent(i);
        form[x_index(n, i)][b_index(n, i)] = v;
        form[b_index(n, i)][x_index(n, i)] = -v;
    }
    SkewLattice { form, big_n: feed.big_n() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QTorusElement {
    terms: BTreeMap<Vec<i64>, QLaurent>,
    rank: usize,
}

/// Drop monomials whose weight exceeds `max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    pub weights: Vec<i64>,
    pub max: i64,
}

impl Grading {
    pub fn weight(&self, v: &[i64]) -> i64 {
        v.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }
}

impl QTorusElement {
    pub fn zero(rank: usize) -> Self {
        QTorusElement {
            terms: BTreeMap::new(),
            rank,
        }
    }

    pub fn monomial(v: Vec<i64>, coeff: QLaurent) -> Self {
        let rank = v.len();
        let mut out = QTorusElement::zero(rank);
        if !coeff.is_exact_zero() {
            out.terms.insert(v, coeff);
        }
        out
    }

    pub fn generator(rank: usize, a: usize, cutoff: Option<i64>) -> Self {
        let mut v = vec![0; rank];
        v[a] = 1;
        QTorusElement::monomial(v, QLaurent::one(cutoff))
    }

    pub fn one(rank: usize, cutoff: Option<i64>) -> Self {
        QTorusElement::monomial(vec![0; rank], QLaurent::one(cutoff))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &QLaurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, v: &[i64]) -> Option<&QLaurent> {
        self.terms.get(v)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, v: Vec<i64>, c: QLaurent) {
        match self.terms.get_mut(&v) {
            Some(slot) => {
                *slot = slot.add(&c);
                if slot.is_exact_zero() {
                    self.terms.remove(&v);
                }
            }
            None => {
                if !c.is_exact_zero() {
                    self.terms.insert(v, c);
                }
            }
        }
    }

    pub fn add(&self, other: &QTorusElement) -> QTorusElement {
        let mut out = self.clone();
        for (v, c) in other.terms() {
            out.add_term(v.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &QLaurent) -> QTorusElement {
        let mut out = QTorusElement::zero(self.rank);
        for (v, x) in self.terms() {
            out.add_term(v.clone(), x.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &QTorusElement, lattice: &SkewLattice) -> QTorusElement {
        self.mul_graded(other, lattice, None)
    }

    pub fn mul_graded(&self, other: &QTorusElement, lattice: &SkewLattice, grading: Option<&Grading>) -> QTorusElement {
        let mut out = QTorusElement::zero(self.rank);
        for (v, a) in self.terms() {
            for (w, b) in other.terms() {
                let sum: Vec<i64> = v.iter().zip(w).map(|(x, y)| x + y).collect();
                if grading.is_some_and(|g| g.weight(&sum) > g.max) {
                    continue;
                }
                out.add_term(sum, a.mul(b).shift(lattice.pair(v, w)));
            }
        }
        out
    }

    /// The `*` anti-involution: fixes every `E(v)` and inverts `q`.
    pub fn star(&self) -> QTorusElement {
        QTorusElement {
            terms: self.terms.iter().map(|(v, c)| (v.clone(), c.invert_q())).collect(),
            rank: self.rank,
        }
    }

    /// Coefficient-wise comparison on exact windows. Monomials present on
    /// only one side compare against zero.
    pub fn compare(&self, other: &QTorusElement) -> CoeffComparison {
        let mut cmp = CoeffComparison::default();
        let keys: std::collections::BTreeSet<&Vec<i64>> = self.terms.keys().chain(other.terms.keys()).collect();
        for v in keys {
            let zero_a;
            let zero_b;
            let a = match self.terms.get(v) {
                Some(c) => c,
                None => {
                    zero_a = QLaurent::zero(None);
                    &zero_a
                }
            };
            let b = match other.terms.get(v) {
                Some(c) => c,
                None => {
                    zero_b = QLaurent::zero(None);
                    &zero_b
                }
            };
            cmp.absorb(a.compare(b));
        }
        cmp
    }

    /// Lines `E(a,b,...) q^(e/N) : coeff`, sorted by monomial then exponent.
    pub fn dump(&self, big_n: u64) -> String {
        let mut lines = Vec::new();
        for (v, c) in self.terms() {
            let vs: Vec<String> = v.iter().map(ToString::to_string).collect();
            for (e, coeff) in c.terms() {
                lines.push(format!("E({}) q^({e}/{big_n}) : {coeff}", vs.join(",")));
            }
        }
        lines.join("\n")
    }
}

impl fmt::Display for QTorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(v, c)| {
                let vs: Vec<String> = v.iter().map(ToString::to_string).collect();
                format!("({c})E({})", vs.join(","))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A Weyl monomial `q^(shift/N) E(v)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylMonomial {
    pub shift: i64,
    pub v: Vec<i64>,
}

impl WeylMonomial {
    pub fn new(v: Vec<i64>) -> Self {
        WeylMonomial { shift: 0, v }
    }

    pub fn to_element(&self, cutoff: Option<i64>) -> QTorusElement {
        QTorusElement::monomial(self.v.clone(), QLaurent::monomial(self.shift, BigInt::one(), cutoff))
    }
}

/// `X̃_i = X_i ∏ B_j^{ε_ij}` as a Weyl monomial. The ordering correction
/// vanishes because `ε_ii = 0`.
pub fn tilde_x_monomial(feed: &Feed, i: usize) -> WeylMonomial {
    let n = feed.n();
    let lattice = build_d_torus(feed);
    let x = lattice.basis(x_index(n, i));
    let mut b = vec![0; 2 * n];
    for j in 0..n {
        b[b_index(n, j)] = feed.eps(i, j);
    }
    let shift = lattice.pair(&x, &b);
    let v = x.iter().zip(&b).map(|(p, r)| p + r).collect();
    WeylMonomial { shift, v }
}

pub fn tilde_x_quantum(feed: &Feed, i: usize, cutoff: Option<i64>) -> QTorusElement {
    tilde_x_monomial(feed, i).to_element(cutoff)
}

/// Image of `E(v)` under the algebra map sending generator `a` to the Weyl
/// monomial `images[a]`, where `source` is the form of the domain.
pub fn map_monomial(source: &SkewLattice, target: &SkewLattice, images: &[WeylMonomial], v: &[i64]) -> WeylMonomial {
    let m = target.rank();
    let mut out = vec![0i64; m];
    let mut shift = 0i64;
    for (a, &va) in v.iter().enumerate() {
        shift += va * images[a].shift;
        for (o, x) in out.iter_mut().zip(&images[a].v) {
            *o += va * x;
        }
    }
    // E(v) = q^{-Σ_{a<b} v_a v_b <a,b>} ∏_a E(e_a)^{v_a}
    for a in 0..v.len() {
        for b in (a + 1)..v.len() {
            let vv = v[a] * v[b];
            if vv != 0 {
                shift += vv * (target.pair(&images[a].v, &images[b].v) - source.entry(a, b));
            }
        }
    }
    WeylMonomial { shift, v: out }
}

pub fn map_element(
    source: &SkewLattice,
    target: &SkewLattice,
    images: &[WeylMonomial],
    el: &QTorusElement,
) -> QTorusElement {
    let mut out = QTorusElement::zero(target.rank());
    for (v, c) in el.terms() {
        let img = map_monomial(source, target, images, v);
        out.add_term(img.v, c.shift(img.shift));
    }
    out
}

/// Images of the primed generators `B'_i, X'_i` under the monomial part of
/// the quantum mutation at `k`, as Weyl monomials of the unprimed torus.
pub fn mu_prime_images(feed: &Feed, k: usize) -> Result<Vec<WeylMonomial>> {
    let n = feed.n();
    if k >= n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    let lattice = build_d_torus(feed);
    let mut images = vec![WeylMonomial::new(vec![0; 2 * n]); 2 * n];
    for i in 0..n {
        let mut v = vec![0; 2 * n];
        if i == k {
            v[b_index(n, k)] = -1;
            for j in 0..n {
                v[b_index(n, j)] += pos(-feed.eps(k, j));
            }
        } else {
            v[b_index(n, i)] = 1;
        }
        images[b_index(n, i)] = WeylMonomial::new(v);
    }
    for i in 0..n {
        let mut v = vec![0; 2 * n];
        if i == k {
            v[x_index(n, k)] = -1;
            images[x_index(n, i)] = WeylMonomial::new(v);
            continue;
        }
        let m = pos(feed.eps(i, k));
        let xi = lattice.basis(x_index(n, i));
        let mut xk = vec![0; 2 * n];
        xk[x_index(n, k)] = m;
        // q_k^{-ε_ik m} X_i X_k^m
        let shift = -feed.eps(i, k) * m * feed.q_exponent(k) + lattice.pair(&xi, &xk);
        v[x_index(n, i)] = 1;
        v[x_index(n, k)] = m;
        images[x_index(n, i)] = WeylMonomial { shift, v };
    }
    Ok(images)
}

/// `μ'_k` applied to an element written in the primed generators.
pub fn mu_prime(feed: &Feed, k: usize, el: &QTorusElement) -> Result<QTorusElement> {
    let primed = feed.mutate(k)?;
    let source = build_d_torus(&primed);
    let target = build_d_torus(feed);
    if el.rank() != source.rank() {
        return Err(Error::Dimension("element rank does not match the feed".into()));
    }
    Ok(map_element(&source, &target, &mu_prime_images(feed, k)?, el))
}

/// Whether the monomial map preserves all pairwise commutation relations of
/// the domain.
pub fn preserves_relations(source: &SkewLattice, target: &SkewLattice, images: &[WeylMonomial]) -> bool {
    (0..source.rank())
        .all(|a| (0..source.rank()).all(|b| target.pair(&images[a].v, &images[b].v) == source.entry(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Feed {
        Feed::skew(vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    fn gen(lat: &SkewLattice, a: usize) -> QTorusElement {
        QTorusElement::generator(lat.rank(), a, None)
    }

    /// `lhs == q^(e/N) rhs` as elements.
    fn q_related(lat: &SkewLattice, l: (&QTorusElement, &QTorusElement), r: (&QTorusElement, &QTorusElement), e: i64) {
        let lhs = l.0.mul(l.1, lat);
        let rhs = r.0.mul(r.1, lat).scale(&QLaurent::monomial(e, BigInt::one(), None));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_torus_relations() {
        let f = Feed::new(vec![vec![0, 2, 0], vec![-1, 0, 1], vec![0, -1, 0]], vec![1, 2, 2]).unwrap();
        let lat = build_d_torus(&f);
        let n = 3;
        let big_n = f.big_n() as i64;
        assert_eq!(big_n, 2);
        for i in 0..n {
            for j in 0..n {
                let (xi, xj) = (gen(&lat, x_index(n, i)), gen(&lat, x_index(n, j)));
                // q_j^{-ε_ij} X_i X_j = q_i^{-ε_ji} X_j X_i
                let e = f.eps(i, j) * f.q_exponent(j) - f.eps(j, i) * f.q_exponent(i);
                q_related(&lat, (&xi, &xj), (&xj, &xi), e);
                let bi = gen(&lat, b_index(n, i));
                let bj = gen(&lat, b_index(n, j));
                q_related(&lat, (&bi, &bj), (&bj, &bi), 0);
                if i == j {
                    q_related(&lat, (&xi, &bi), (&bi, &xi), 2 * f.q_exponent(i));
                } else {
                    q_related(&lat, (&bi, &xj), (&xj, &bi), 0);
                }
            }
        }
    }

    #[test]
    fn star_fixes_generators_and_inverts_q() {
        let lat = build_d_torus(&a2());
        let x1 = gen(&lat, 2);
        assert_eq!(x1.star(), x1);
        let x2 = gen(&lat, 3);
        let prod = x1.mul(&x2, &lat);
        // star(X_1 X_2) = X_2 X_1
        assert_eq!(prod.star(), x2.mul(&x1, &lat));
        let qx = x1.scale(&QLaurent::from_terms([(1, 1)], None));
        assert_eq!(qx.star().star(), qx);
        assert_eq!(qx.star(), x1.scale(&QLaurent::from_terms([(-1, 1)], None)));
    }

    #[test]
    fn tilde_relations() {
        for f in [
            a2(),
            Feed::new(vec![vec![0, 3], vec![-1, 0]], vec![1, 3]).unwrap(),
            Feed::new(vec![vec![0, 2, -1], vec![-1, 0, 1], vec![1, -2, 0]], vec![1, 2, 1]).unwrap(),
        ] {
            let n = f.n();
            let lat = build_d_torus(&f);
            let t: Vec<QTorusElement> = (0..n).map(|i| tilde_x_quantum(&f, i, None)).collect();
            for i in 0..n {
                for j in 0..n {
                    // q_j^{ε_ij} X̃_i X̃_j = q_i^{ε_ji} X̃_j X̃_i
                    let e = -f.eps(i, j) * f.q_exponent(j) + f.eps(j, i) * f.q_exponent(i);
                    q_related(&lat, (&t[i], &t[j]), (&t[j], &t[i]), e);
                    let bj = gen(&lat, b_index(n, j));
                    let e = if i == j { 2 * f.q_exponent(i) } else { 0 };
                    q_related(&lat, (&t[i], &bj), (&bj, &t[i]), e);
                    let xi = gen(&lat, x_index(n, i));
                    q_related(&lat, (&xi, &t[j]), (&t[j], &xi), 0);
                }
            }
        }
        let z = Feed::zero(2);
        assert_eq!(tilde_x_quantum(&z, 1, None), QTorusElement::generator(4, 3, None));
    }

    #[test]
    fn mu_prime_generators() {
        let f = a2();
        let n = 2;
        let primed = f.mutate(0).unwrap();
        let src = build_d_torus(&primed);
        let tgt = build_d_torus(&f);
        let images = mu_prime_images(&f, 0).unwrap();
        assert!(preserves_relations(&src, &tgt, &images));
        let b2 = mu_prime(&f, 0, &QTorusElement::generator(4, b_index(n, 1), None)).unwrap();
        assert_eq!(b2, QTorusElement::generator(4, b_index(n, 1), None));
        let x1 = mu_prime(&f, 0, &QTorusElement::generator(4, x_index(n, 0), None)).unwrap();
        assert_eq!(x1, QTorusElement::monomial(vec![0, 0, -1, 0], QLaurent::one(None)));
        // ε_21 = -1 < 0 so X'_2 -> X_2
        let x2 = mu_prime(&f, 0, &QTorusElement::generator(4, x_index(n, 1), None)).unwrap();
        assert_eq!(x2, QTorusElement::generator(4, x_index(n, 1), None));
        // k = 2: ε_12 = 1 so X'_1 -> q_2^{-1} X_1 X_2 = E(x_1 + x_2)
        let x1 = mu_prime(&f, 1, &QTorusElement::generator(4, x_index(n, 0), None)).unwrap();
        assert_eq!(x1, QTorusElement::monomial(vec![0, 0, 1, 1], QLaurent::one(None)));
    }

    #[test]
    fn mu_prime_preserves_relations_for_random_feeds() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let f = Feed::random(&mut rng, 4, 3, 2);
            for k in 0..f.n() {
                let src = build_d_torus(&f.mutate(k).unwrap());
                let tgt = build_d_torus(&f);
                assert!(preserves_relations(&src, &tgt, &mu_prime_images(&f, k).unwrap()), "{f} k={k}");
            }
        }
    }

    #[test]
    fn dump_format() {
        let lat = SkewLattice::rank2_heisenberg();
        let p = QTorusElement::generator(2, 0, None);
        let q = QTorusElement::generator(2, 1, None);
        let pq = p.mul(&q, &lat).add(&q.mul(&p, &lat));
        assert_eq!(pq.dump(1), "E(1,1) q^(-1/1) : 1\nE(1,1) q^(1/1) : 1");
    }
}
