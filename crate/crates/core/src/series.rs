//! Formal series for the compact quantum dilogarithm
//! `Ψ^Q(z) = ∏_{i≥1} (1 + Q^{2i-1} z)^{-1}` and the identities it satisfies.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qlaurent::{CoeffComparison, QLaurent, ZSeries};
use crate::qtorus::{Grading, QTorusElement, SkewLattice};
use crate::seed::Feed;
use crate::twisted::{mu_sharp_images, TwistContext};

/// Truncation: `z`-degree (or grading) bound and symmetric `q`-exponent cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeriesOrder {
    pub z: usize,
    pub q: i64,
}

impl SeriesOrder {
    pub fn new(z: usize, q: i64) -> Self {
        SeriesOrder { z, q }
    }
}

/// `Ψ^{q^base}(q^shift z)^{-1}`, expanded from the product. Exponents are in
/// whatever unit `base` and `shift` use.
pub fn psi_inverse_series(base: i64, shift: i64, order: SeriesOrder) -> Result<ZSeries> {
    if base <= 0 {
        return Err(Error::Config("Ψ needs a positive base exponent".into()));
    }
    let cutoff = Some(order.q);
    let mut out = ZSeries::one(order.z, cutoff);
    // lowest exponent a further factor can reach once combined with others
    let spare = (order.z as i64 - 1).max(0) * (base + shift).min(0);
    let mut i = 1i64;
    loop {
        let e = base * (2 * i - 1) + shift;
        if e + spare > order.q {
            break;
        }
        out = out.mul(&ZSeries::linear(e, order.z, cutoff));
        i += 1;
    }
    let coeffs = out
        .coeffs()
        .iter()
        .enumerate()
        .map(|(m, c)| {
            let mut c = c.clone();
            if m > 0 {
                c.mark_inexact_above(order.q);
            }
            c
        })
        .collect();
    Ok(ZSeries::from_coeffs(coeffs, cutoff))
}

/// `Ψ^{q^base}(q^shift z)`.
pub fn psi_series(base: i64, shift: i64, order: SeriesOrder) -> Result<ZSeries> {
    psi_inverse_series(base, shift, order)?
        .inverse()
        .ok_or_else(|| Error::Config("Ψ^{-1} has a non-unit constant term".into()))
}

/// `Σ_m c_m E(m v)` for a series `Σ c_m z^m`, dropping terms beyond the
/// grading.
pub fn series_at(series: &ZSeries, v: &[i64], grading: &Grading) -> QTorusElement {
    let mut out = QTorusElement::zero(v.len());
    for (m, c) in series.coeffs().iter().enumerate() {
        let mv: Vec<i64> = v.iter().map(|x| x * m as i64).collect();
        if grading.weight(&mv) > grading.max {
            break;
        }
        out = out.add(&QTorusElement::monomial(mv, c.clone()));
    }
    out
}

fn product(factors: &[QTorusElement], lattice: &SkewLattice, grading: &Grading, cutoff: i64) -> QTorusElement {
    factors.iter().fold(QTorusElement::one(lattice.rank(), Some(cutoff)), |acc, f| {
        acc.mul_graded(f, lattice, Some(grading))
    })
}

/// Result of comparing two sides of a series identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesReport {
    pub name: String,
    pub order: SeriesOrder,
    pub comparison: CoeffComparison,
}

impl SeriesReport {
    pub fn holds(&self) -> bool {
        self.comparison.agrees() && self.comparison.compared > 0
    }
}

/// One `Ψ^{q^base}(q^shift E(v))` factor, possibly inverted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiFactor {
    pub base: i64,
    pub shift: i64,
    pub v: Vec<i64>,
    pub inverse: bool,
}

impl PsiFactor {
    pub fn new(base: i64, v: &[i64]) -> Self {
        PsiFactor {
            base,
            shift: 0,
            v: v.to_vec(),
            inverse: false,
        }
    }

    pub fn shifted(mut self, s: i64) -> Self {
        self.shift = s;
        self
    }

    pub fn inv(mut self) -> Self {
        self.inverse = true;
        self
    }

    fn expand(&self, lattice: &SkewLattice, grading: &Grading, order: SeriesOrder) -> Result<QTorusElement> {
        let step = grading.weight(&self.v);
        if step <= 0 {
            return Err(Error::Config("Ψ argument must have positive grading".into()));
        }
        let z = SeriesOrder::new((grading.max / step) as usize, order.q);
        let s = if self.inverse {
            psi_inverse_series(self.base, self.shift, z)?
        } else {
            psi_series(self.base, self.shift, z)?
        };
        debug_assert_eq!(self.v.len(), lattice.rank());
        Ok(series_at(&s, &self.v, grading))
    }
}

/// Compare two ordered products of `Ψ` factors in a quantum torus.
pub fn compare_products(
    name: &str,
    lattice: &SkewLattice,
    grading: &Grading,
    lhs: &[PsiFactor],
    rhs: &[PsiFactor],
    order: SeriesOrder,
) -> Result<SeriesReport> {
    let expand = |fs: &[PsiFactor]| -> Result<QTorusElement> {
        let parts = fs
            .iter()
            .map(|f| f.expand(lattice, grading, order))
            .collect::<Result<Vec<_>>>()?;
        Ok(product(&parts, lattice, grading, order.q))
    };
    let l = expand(lhs)?;
    let r = expand(rhs)?;
    Ok(SeriesReport {
        name: name.into(),
        order,
        comparison: l.compare(&r),
    })
}

/// Which middle argument the pentagon uses, for `X = E(1,0)`, `Y = E(0,1)`
/// with `XY = q^2 YX`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PentagonMiddle {
    /// `q X Y = q^2 E(1,1)`.
    QXY,
    /// `q^{-1} X Y = E(1,1)`.
    QInvXY,
}

/// `Ψ(Y)^{-1}Ψ(X)^{-1} = Ψ(X)^{-1}Ψ(middle)^{-1}Ψ(Y)^{-1}`.
pub fn check_pentagon(middle: PentagonMiddle, order: SeriesOrder) -> Result<SeriesReport> {
    let lattice = SkewLattice::rank2_heisenberg();
    let grading = Grading {
        weights: vec![1, 1],
        max: order.z as i64,
    };
    let x = [1, 0];
    let y = [0, 1];
    let mid_shift = match middle {
        PentagonMiddle::QXY => 2,
        PentagonMiddle::QInvXY => 0,
    };
    compare_products(
        &format!("pentagon ({middle:?})"),
        &lattice,
        &grading,
        &[PsiFactor::new(1, &y).inv(), PsiFactor::new(1, &x).inv()],
        &[
            PsiFactor::new(1, &x).inv(),
            PsiFactor::new(1, &[1, 1]).shifted(mid_shift).inv(),
            PsiFactor::new(1, &y).inv(),
        ],
        order,
    )
}

pub fn verify_pentagon_series(mz: usize, mq: i64) -> Result<bool> {
    Ok(check_pentagon(PentagonMiddle::QInvXY, SeriesOrder::new(mz, mq))?.holds())
}

/// `Ψ^{q^2}(E(2,0))Ψ^q(E(0,1)) = Ψ^q(E(0,1))Ψ^{q^2}(E(2,2))Ψ^q(E(2,1))Ψ^{q^2}(E(2,0))`.
pub fn check_hexagon(order: SeriesOrder) -> Result<SeriesReport> {
    let lattice = SkewLattice::rank2_heisenberg();
    let grading = Grading {
        weights: vec![1, 2],
        max: 2 * order.z as i64,
    };
    compare_products(
        "hexagon",
        &lattice,
        &grading,
        &[PsiFactor::new(2, &[2, 0]), PsiFactor::new(1, &[0, 1])],
        &[
            PsiFactor::new(1, &[0, 1]),
            PsiFactor::new(2, &[2, 2]),
            PsiFactor::new(1, &[2, 1]),
            PsiFactor::new(2, &[2, 0]),
        ],
        order,
    )
}

/// `Ψ^{q^2}(qz)Ψ^{q^2}(q^{-1}z) = Ψ^q(z)`.
pub fn check_double_splitting(order: SeriesOrder) -> Result<SeriesReport> {
    let lhs = psi_series(2, 1, order)?.mul(&psi_series(2, -1, order)?);
    let rhs = psi_series(1, 0, order)?;
    Ok(SeriesReport {
        name: "double splitting".into(),
        order,
        comparison: lhs.compare(&rhs),
    })
}

pub fn verify_hexagon_series(mz: usize, mq: i64) -> Result<bool> {
    let order = SeriesOrder::new(mz, mq);
    Ok(check_double_splitting(order)?.holds() && check_hexagon(order)?.holds())
}

/// Six-factor identity with `E(3,0)E(0,1) = q^6 E(0,1)E(3,0)`.
pub fn check_octagon(order: SeriesOrder) -> Result<SeriesReport> {
    let lattice = SkewLattice::rank2_heisenberg();
    let grading = Grading {
        weights: vec![1, 3],
        max: 3 * order.z as i64,
    };
    compare_products(
        "octagon",
        &lattice,
        &grading,
        &[PsiFactor::new(3, &[3, 0]), PsiFactor::new(1, &[0, 1])],
        &[
            PsiFactor::new(1, &[0, 1]),
            PsiFactor::new(3, &[3, 3]),
            PsiFactor::new(1, &[3, 2]),
            PsiFactor::new(3, &[6, 3]),
            PsiFactor::new(1, &[3, 1]),
            PsiFactor::new(3, &[3, 0]),
        ],
        order,
    )
}

/// `Ψ^{q^3}(q^{-2}z)Ψ^{q^3}(z)Ψ^{q^3}(q^2 z) = Ψ^q(z)`.
pub fn check_triple_splitting(order: SeriesOrder) -> Result<SeriesReport> {
    let lhs = psi_series(3, -2, order)?
        .mul(&psi_series(3, 0, order)?)
        .mul(&psi_series(3, 2, order)?);
    let rhs = psi_series(1, 0, order)?;
    Ok(SeriesReport {
        name: "triple splitting".into(),
        order,
        comparison: lhs.compare(&rhs),
    })
}

pub fn verify_octagon_series(mz: usize, mq: i64) -> Result<bool> {
    let order = SeriesOrder::new(mz, mq);
    Ok(check_triple_splitting(order)?.holds() && check_octagon(order)?.holds())
}

/// `Ψ^q(q^2 z) = (1 + qz)Ψ^q(z)`.
pub fn check_functional_equation(order: SeriesOrder) -> Result<SeriesReport> {
    let lhs = psi_series(1, 2, order)?;
    let rhs = ZSeries::linear(1, order.z, Some(order.q)).mul(&psi_series(1, 0, order)?);
    Ok(SeriesReport {
        name: "functional equation".into(),
        order,
        comparison: lhs.compare(&rhs),
    })
}

fn factor_product(factors: &std::collections::BTreeMap<i64, i64>, order: SeriesOrder) -> Result<ZSeries> {
    let mut out = ZSeries::one(order.z, Some(order.q));
    for (&a, &m) in factors {
        let f = ZSeries::linear(a, order.z, Some(order.q))
            .pow(m)
            .ok_or_else(|| Error::Config("non-invertible factor".into()))?;
        out = out.mul(&f);
    }
    Ok(out)
}

/// Conjugation by `Ψ^{q_k}(X_k)Ψ^{q_k}(X̃_k)^{-1}` against the closed forms
/// of `μ♯_k`, generator by generator. Moving the conjugator past `E(g)`
/// leaves `E(g)` times the commutative series
/// `Ψ(q^a X_k)Ψ(X_k)^{-1}` and `Ψ(q^b X̃_k)^{-1}Ψ(X̃_k)`.
pub fn check_conjugation_form(feed: &Feed, k: usize, order: SeriesOrder) -> Result<Vec<SeriesReport>> {
    let ctx = TwistContext::new(feed, k)?;
    let base = feed.q_exponent(k);
    let images = mu_sharp_images(&ctx);
    let mut out = Vec::new();
    for (g, img) in images.iter().enumerate() {
        let e_g = ctx.lattice.basis(g);
        if !(img.shift == 0 && img.v == e_g) {
            return Err(Error::Hypothesis(format!("image of generator {} is not E(g) times factors", g + 1)));
        }
        let a = ctx.x_commutator(&e_g);
        let b = ctx.xt_commutator(&e_g);
        let x_part = psi_series(base, a, order)?.mul(&psi_inverse_series(base, 0, order)?);
        let t_part = psi_inverse_series(base, b + ctx.xt_shift(), order)?.mul(&psi_series(base, ctx.xt_shift(), order)?);
        let mut cmp = CoeffComparison::default();
        if ctx.tilde_is_x() {
            cmp.absorb(x_part.mul(&t_part).compare(&factor_product(&img.x_factors, order)?));
        } else {
            cmp.absorb(x_part.compare(&factor_product(&img.x_factors, order)?));
            // factors are kept in terms of X̃_k = q^s E(x̃); the series above
            // are in the variable E(x̃)
            let shifted = img.xt_factors.iter().map(|(&c, &m)| (c + ctx.xt_shift(), m)).collect();
            cmp.absorb(t_part.compare(&factor_product(&shifted, order)?));
        }
        out.push(SeriesReport {
            name: format!("conjugation of generator {}", g + 1),
            order,
            comparison: cmp,
        });
    }
    Ok(out)
}

pub fn verify_conjugation_form(feed: &Feed, k: usize, order: SeriesOrder) -> Result<bool> {
    Ok(check_conjugation_form(feed, k, order)?.iter().all(SeriesReport::holds))
}

/// `Σ_{m} q^{m^2} z^m / ((1-q^2)...(1-q^{2m}))` with `q -> q^base`, used
/// as an independent check of the product expansion.
pub fn psi_inverse_closed_form(base: i64, order: SeriesOrder) -> ZSeries {
    let cutoff = Some(order.q);
    let mut coeffs = Vec::with_capacity(order.z + 1);
    let mut denom_inv = QLaurent::one(cutoff);
    for m in 0..=order.z {
        if m > 0 {
            // 1/(1 - Q^{2m}) = Σ Q^{2mj}
            let step = 2 * base * m as i64;
            let terms = (0..).map(|j| j * step).take_while(|&e| e <= order.q).map(|e| (e, 1));
            let mut geo = QLaurent::from_terms(terms, cutoff);
            geo.mark_inexact_above(order.q);
            denom_inv = denom_inv.mul(&geo);
        }
        let mm = m as i64;
        coeffs.push(denom_inv.mul(&QLaurent::monomial(base * mm * mm, BigInt::one(), cutoff)));
    }
    ZSeries::from_coeffs(coeffs, cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_coefficient() {
        let s = psi_inverse_series(1, 0, SeriesOrder::new(3, 11)).unwrap();
        assert!(s.coeff(0).is_one());
        assert_eq!(s.coeff(1), &{
            let mut c = QLaurent::from_terms([(1, 1), (3, 1), (5, 1), (7, 1), (9, 1), (11, 1)], Some(11));
            c.mark_inexact_above(11);
            c
        });
        // z^2: Σ_{i<j} q^{2i+2j-2}: q^4 + q^6 + 2q^8 + 2q^10
        let c2 = s.coeff(2);
        let expect = [(4, 1), (6, 1), (8, 2), (10, 2)];
        for (e, c) in expect {
            assert_eq!(c2.coeff(e), BigInt::from(c));
        }
    }

    #[test]
    fn product_matches_closed_form() {
        for base in 1..=3 {
            let order = SeriesOrder::new(6, 60);
            let cmp = psi_inverse_series(base, 0, order).unwrap().compare(&psi_inverse_closed_form(base, order));
            assert!(cmp.agrees(), "{:?}", cmp.mismatches);
            assert!(cmp.compared > 20);
        }
    }

    #[test]
    fn functional_equation() {
        let r = check_functional_equation(SeriesOrder::new(6, 40)).unwrap();
        assert!(r.holds(), "{:?}", r.comparison);
    }

    #[test]
    fn splitting_identities() {
        let order = SeriesOrder::new(5, 40);
        assert!(check_double_splitting(order).unwrap().holds());
        assert!(check_triple_splitting(order).unwrap().holds());
    }

    #[test]
    fn pentagon_middle_argument() {
        let order = SeriesOrder::new(6, 40);
        let good = check_pentagon(PentagonMiddle::QInvXY, order).unwrap();
        let bad = check_pentagon(PentagonMiddle::QXY, order).unwrap();
        assert!(good.holds(), "{:?}", good.comparison);
        assert!(good.comparison.compared > 300);
        assert!(!bad.holds());
    }

    #[test]
    fn hexagon_and_octagon() {
        let r = check_hexagon(SeriesOrder::new(4, 40)).unwrap();
        assert!(r.holds(), "{:?}", r.comparison);
        assert!(r.comparison.compared > 150);
        let r = check_octagon(SeriesOrder::new(3, 40)).unwrap();
        assert!(r.holds(), "{:?}", r.comparison);
        assert!(r.comparison.compared > 100);
    }

    #[test]
    fn conjugation_form_examples() {
        for f in [
            Feed::skew(vec![vec![0, 1], vec![-1, 0]]).unwrap(),
            Feed::zero(2),
            Feed::new(vec![vec![0, 2], vec![-1, 0]], vec![1, 2]).unwrap(),
            Feed::new(vec![vec![0, 3], vec![-1, 0]], vec![1, 3]).unwrap(),
        ] {
            for k in 0..2 {
                for r in check_conjugation_form(&f, k, SeriesOrder::new(6, 40)).unwrap() {
                    assert!(r.holds(), "{f} k={k} {}: {:?}", r.name, r.comparison);
                }
            }
        }
    }
}
