//! Floating-point evaluation of the compact and non-compact quantum
//! dilogarithms.
//!
//! `Φ^h(z) = exp(-1/4 ∫_Ω e^{-ipz} / (sinh(πp) sinh(πhp)) dp/p)`, with `Ω` the
//! real line indented around the origin by a half circle. Away from the
//! origin the two halves of the line are folded together:
//! `f(p) + f(-p) = -2i sin(pz) / (p sinh(πp) sinh(πhp))`.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which side of the origin the contour passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Detour {
    Above,
    Below,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilogConfig {
    pub hbar: f64,
    /// Gauss-Legendre nodes per panel.
    pub nodes: usize,
    /// Width of the uniform panels beyond `p = 1`.
    pub panel_width: f64,
    /// Radius of the half circle around the origin.
    pub radius: f64,
    /// The line integral stops once the integrand bound drops below this.
    pub tail_eps: f64,
    /// Hard limit on the number of factors in a `Ψ` product.
    pub psi_terms: usize,
    pub tol: f64,
}

impl Default for DilogConfig {
    fn default() -> Self {
        DilogConfig {
            hbar: std::f64::consts::SQRT_2 - 1.0,
            nodes: 24,
            panel_width: 0.5,
            radius: 1e-2,
            tail_eps: 1e-18,
            psi_terms: 100_000,
            tol: 1e-8,
        }
    }
}

impl DilogConfig {
    pub fn with_hbar(hbar: f64) -> Self {
        DilogConfig {
            hbar,
            ..DilogConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return Err(Error::Config(format!("hbar must be positive, got {}", self.hbar)));
        }
        if self.nodes == 0 || self.panel_width <= 0.0 || self.radius <= 0.0 || self.radius >= 0.5 {
            return Err(Error::Config("invalid quadrature settings".into()));
        }
        Ok(())
    }

    fn rule(&self) -> GaussLegendre {
        GaussLegendre::new(NonZeroUsize::new(self.nodes).expect("nodes > 0"))
    }
}

/// Half-width of the strip where the integral converges.
pub fn strip_half_width(h: Complex64) -> f64 {
    PI * (1.0 + h.re)
}

pub fn in_strip(h: Complex64, z: Complex64) -> bool {
    z.im.abs() < strip_half_width(h)
}

fn gl_panel<F: FnMut(f64) -> Complex64>(rule: &GaussLegendre, a: f64, b: f64, mut f: F) -> Complex64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    rule.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| f(mid + half * x) * w)
        .sum::<Complex64>()
        * half
}

/// `f(p) + f(-p)` for real `p > 0`, written with decaying exponentials.
fn folded_integrand(h: Complex64, z: Complex64, p: f64) -> Complex64 {
    // 1/sinh(x) = 2 e^{-x} / (1 - e^{-2x})
    let a = 1.0 - (-2.0 * PI * p).exp();
    let b = Complex64::new(1.0, 0.0) - (-2.0 * PI * h * p).exp();
    let decay = (-PI * (Complex64::new(1.0, 0.0) + h) * p).exp();
    let osc = (I * p * z).exp() - (-I * p * z).exp();
    -4.0 * osc * decay / (p * a * b)
}

fn line_integral(cfg: &DilogConfig, rule: &GaussLegendre, h: Complex64, z: Complex64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    // geometric panels from the circle out to p = 1, then uniform ones
    let mut a = cfg.radius;
    while a < 1.0 {
        let b = (2.0 * a).min(1.0);
        total += gl_panel(rule, a, b, |p| folded_integrand(h, z, p));
        a = b;
    }
    let rate = PI * (1.0 + h.re) - z.im.abs();
    loop {
        let b = a + cfg.panel_width;
        total += gl_panel(rule, a, b, |p| folded_integrand(h, z, p));
        a = b;
        // envelope of the integrand beyond a
        let bound = 8.0 * (-rate * a).exp() / a;
        if bound < cfg.tail_eps || a > 1e4 {
            break;
        }
    }
    total
}

fn half_circle(cfg: &DilogConfig, rule: &GaussLegendre, h: Complex64, z: Complex64, detour: Detour) -> Complex64 {
    // p = r e^{iθ}, dp/p = i dθ; θ runs from ±π to 0
    let start = match detour {
        Detour::Above => PI,
        Detour::Below => -PI,
    };
    let f = |theta: f64| {
        let p = cfg.radius * (I * theta).exp();
        I * (-I * p * z).exp() / ((PI * p).sinh() * (PI * h * p).sinh())
    };
    // split into quarters to keep the rule well inside its accurate range
    let mut total = Complex64::new(0.0, 0.0);
    for s in 0..4 {
        let a = start * (1.0 - s as f64 / 4.0);
        let b = start * (1.0 - (s + 1) as f64 / 4.0);
        total += gl_panel(rule, a, b, f);
    }
    total
}

/// `log Φ^h(z)` along the chosen contour, for complex `h` with `Re h > 0`.
pub fn log_phi_h(cfg: &DilogConfig, h: Complex64, z: Complex64, detour: Detour) -> Result<Complex64> {
    if h.re <= 0.0 || h.im < 0.0 {
        return Err(Error::Config(format!("need Re h > 0 and Im h >= 0, got {h}")));
    }
    if !in_strip(h, z) {
        return Err(Error::OutsideStrip(format!(
            "|Im z| = {} is not below {}",
            z.im.abs(),
            strip_half_width(h)
        )));
    }
    let rule = cfg.rule();
    let integral = line_integral(cfg, &rule, h, z) + half_circle(cfg, &rule, h, z, detour);
    Ok(-0.25 * integral)
}

pub fn phi_eval_h(cfg: &DilogConfig, h: Complex64, z: Complex64, detour: Detour) -> Result<Complex64> {
    Ok(log_phi_h(cfg, h, z, detour)?.exp())
}

/// `Φ^ħ(z)` for the configured real `ħ`, contour above the origin.
pub fn phi_eval(cfg: &DilogConfig, z: Complex64) -> Result<Complex64> {
    cfg.validate()?;
    phi_eval_h(cfg, Complex64::new(cfg.hbar, 0.0), z, Detour::Above)
}

/// `q = e^{πiħ}`.
pub fn q_of(h: Complex64) -> Complex64 {
    (PI * I * h).exp()
}

/// `q^∨ = e^{πi/ħ}`.
pub fn q_dual_of(h: Complex64) -> Complex64 {
    (PI * I / h).exp()
}

/// Meromorphic continuation by `Φ(z + 2πiħ) = (1 + q e^z) Φ(z)`, stepping
/// back into the strip before integrating.
pub fn phi_continue(cfg: &DilogConfig, z: Complex64) -> Result<Complex64> {
    cfg.validate()?;
    let h = Complex64::new(cfg.hbar, 0.0);
    let q = q_of(h);
    let step = 2.0 * PI * cfg.hbar;
    let mut w = z;
    let mut factor = Complex64::new(1.0, 0.0);
    // stay a margin inside the strip so the integral converges quickly
    let limit = strip_half_width(h) - 0.5 * PI * cfg.hbar.min(1.0);
    while w.im > limit {
        w -= I * step;
        factor *= Complex64::new(1.0, 0.0) + q * w.exp();
    }
    while w.im < -limit {
        let f = Complex64::new(1.0, 0.0) + q * w.exp();
        if f.norm() < cfg.tol {
            return Err(Error::NearPole(format!("z = {z} is within {} of a pole", cfg.tol)));
        }
        factor /= f;
        w += I * step;
    }
    Ok(factor * phi_eval(cfg, w)?)
}

/// `Ψ^q(z) = ∏ (1 + q^{2i-1} z)^{-1}`, truncated once the remaining factors
/// differ from 1 by less than machine precision.
pub fn psi_eval(cfg: &DilogConfig, q: Complex64, z: Complex64) -> Result<Complex64> {
    if q.norm() >= 1.0 {
        return Err(Error::Config(format!("|q| = {} must be below 1", q.norm())));
    }
    let q2 = q * q;
    let mut term = q * z;
    let mut prod = Complex64::new(1.0, 0.0);
    for _ in 0..cfg.psi_terms {
        let f = Complex64::new(1.0, 0.0) + term;
        if f.norm() < cfg.tol {
            return Err(Error::NearPole(format!("z = {z} is near a pole of Ψ")));
        }
        prod /= f;
        // remaining factors multiply to within |tail| / (1 - |q|^2) of 1
        if term.norm() / (1.0 - q2.norm()) < 1e-17 {
            return Ok(prod);
        }
        term *= q2;
    }
    Err(Error::Config("Ψ product did not converge within psi_terms".into()))
}

/// One numeric check: the largest residual over its sample points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tol: f64,
}

impl Residual {
    pub fn passes(&self) -> bool {
        self.max_residual.is_finite() && self.max_residual < self.tol
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// `c_h = e^{-πi(h + 1/h)/12}`.
pub fn c_h(h: Complex64) -> Complex64 {
    (-PI * I * (h + 1.0 / h) / 12.0).exp()
}

/// `|Φ^ħ(x)| - 1` on real points.
pub fn check_unitarity(cfg: &DilogConfig, xs: &[f64]) -> Result<Residual> {
    let mut worst: f64 = 0.0;
    for &x in xs {
        worst = worst.max((phi_eval(cfg, Complex64::new(x, 0.0))?.norm() - 1.0).abs());
    }
    Ok(Residual {
        name: "unitarity".into(),
        samples: xs.len(),
        max_residual: worst,
        tol: cfg.tol,
    })
}

/// `Φ(z)Φ(-z) = c_ħ exp(z^2 / (4πiħ))`.
pub fn check_involutivity(cfg: &DilogConfig, zs: &[Complex64]) -> Result<Residual> {
    let h = Complex64::new(cfg.hbar, 0.0);
    let mut worst: f64 = 0.0;
    for &z in zs {
        let lhs = phi_eval(cfg, z)? * phi_eval(cfg, -z)?;
        let rhs = c_h(h) * (z * z / (4.0 * PI * I * h)).exp();
        worst = worst.max(rel(lhs, rhs));
    }
    Ok(Residual {
        name: "involutivity".into(),
        samples: zs.len(),
        max_residual: worst,
        tol: cfg.tol,
    })
}

/// `Φ^{1/ħ}(z/ħ) = Φ^ħ(z)`.
pub fn check_duality(cfg: &DilogConfig, zs: &[Complex64]) -> Result<Residual> {
    let dual = DilogConfig {
        hbar: 1.0 / cfg.hbar,
        ..cfg.clone()
    };
    let mut worst: f64 = 0.0;
    for &z in zs {
        worst = worst.max(rel(phi_eval(&dual, z / cfg.hbar)?, phi_eval(cfg, z)?));
    }
    Ok(Residual {
        name: "duality".into(),
        samples: zs.len(),
        max_residual: worst,
        tol: cfg.tol,
    })
}

/// Both shift equations, with every argument inside the strip: the `ħ`
/// shift at real points, the unit shift at points on `Im z = -π`.
pub fn check_functional_equations(cfg: &DilogConfig, xs: &[f64]) -> Result<Residual> {
    let h = Complex64::new(cfg.hbar, 0.0);
    let (q, qd) = (q_of(h), q_dual_of(h));
    let one = Complex64::new(1.0, 0.0);
    let mut worst: f64 = 0.0;
    for &x in xs {
        let z = Complex64::new(x, 0.0);
        let lhs = phi_eval(cfg, z + 2.0 * PI * I * h)?;
        worst = worst.max(rel(lhs, (one + q * z.exp()) * phi_eval(cfg, z)?));
        let z = Complex64::new(x, -PI);
        let lhs = phi_eval(cfg, z + 2.0 * PI * I)?;
        worst = worst.max(rel(lhs, (one + qd * (z / h).exp()) * phi_eval(cfg, z)?));
    }
    Ok(Residual {
        name: "functional equations".into(),
        samples: 2 * xs.len(),
        max_residual: worst,
        tol: cfg.tol,
    })
}

/// `Φ(z + 2πiħM)/Φ(z)` and `Φ(z + 2πiM)/Φ(z)` against their finite
/// products. Points outside the strip go through [`phi_continue`], which
/// only uses the `ħ`-shift equation.
pub fn check_shift_products(cfg: &DilogConfig, m: i64, xs: &[f64]) -> Result<Residual> {
    let h = Complex64::new(cfg.hbar, 0.0);
    let (q, qd) = (q_of(h), q_dual_of(h));
    let one = Complex64::new(1.0, 0.0);
    let s = m.signum() as i32;
    let mut worst: f64 = 0.0;
    for &x in xs {
        let z = Complex64::new(x, 0.0);
        let base = phi_eval(cfg, z)?;
        let mut expect = one;
        let mut expect_dual = one;
        for r in 1..=m.abs() as i32 {
            expect *= (one + q.powi((2 * r - 1) * s) * z.exp()).powi(s);
            expect_dual *= (one + qd.powi((2 * r - 1) * s) * (z / h).exp()).powi(s);
        }
        let lhs = phi_continue(cfg, z + 2.0 * PI * I * h * m as f64)? / base;
        worst = worst.max(rel(lhs, expect));
        let lhs = phi_continue(cfg, z + 2.0 * PI * I * m as f64)? / base;
        worst = worst.max(rel(lhs, expect_dual));
    }
    Ok(Residual {
        name: format!("shift products M={m}"),
        samples: 2 * xs.len(),
        max_residual: worst,
        tol: cfg.tol,
    })
}

/// `Ψ^q(e^z) / Ψ^{1/q^∨}(e^{z/h})` against the contour integral at complex
/// `h`.
pub fn check_ratio_relation(cfg: &DilogConfig, h: Complex64, z: Complex64) -> Result<f64> {
    if h.im <= 0.0 {
        return Err(Error::Config("the ratio relation needs Im h > 0".into()));
    }
    let lhs = psi_eval(cfg, q_of(h), z.exp())? / psi_eval(cfg, 1.0 / q_dual_of(h), (z / h).exp())?;
    let rhs = phi_eval_h(cfg, h, z, Detour::Above)?;
    Ok(rel(lhs, rhs))
}

/// Exponent picked up by moving the detour from above to below the origin:
/// `Φ_below(z) = Φ_above(z) · exp(i(z^2/(4πh) + π(h + 1/h)/12))`.
pub fn detour_jump(h: Complex64, z: Complex64) -> Complex64 {
    I * (z * z / (4.0 * PI * h) + PI * (h + 1.0 / h) / 12.0)
}

/// Largest `|Φ_below/Φ_above - 1|` over the points, and largest deviation
/// of that ratio from the residue prediction [`detour_jump`].
pub fn check_detour(cfg: &DilogConfig, zs: &[Complex64]) -> Result<(Residual, Residual)> {
    let h = Complex64::new(cfg.hbar, 0.0);
    let mut diff: f64 = 0.0;
    let mut pred: f64 = 0.0;
    for &z in zs {
        let above = log_phi_h(cfg, h, z, Detour::Above)?;
        let below = log_phi_h(cfg, h, z, Detour::Below)?;
        diff = diff.max(((below - above).exp() - 1.0).norm());
        pred = pred.max(((below - above - detour_jump(h, z)).exp() - 1.0).norm());
    }
    Ok((
        Residual {
            name: "detour independence".into(),
            samples: zs.len(),
            max_residual: diff,
            tol: cfg.tol,
        },
        Residual {
            name: "detour residue prediction".into(),
            samples: zs.len(),
            max_residual: pred,
            tol: cfg.tol,
        },
    ))
}

/// Evenly spread sample points on `[-a, a]`.
pub fn real_samples(count: usize, a: f64) -> Vec<f64> {
    if count == 1 {
        return vec![0.0];
    }
    (0..count)
        .map(|i| -a + 2.0 * a * i as f64 / (count - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phi_at_zero_squares_to_c_h() {
        let cfg = DilogConfig::default();
        let v = phi_eval(&cfg, c(0.0, 0.0)).unwrap();
        let h = c(cfg.hbar, 0.0);
        assert!((v * v - c_h(h)).norm() < 1e-10, "{v}");
    }

    #[test]
    fn unitary_on_reals() {
        let cfg = DilogConfig::default();
        let r = check_unitarity(&cfg, &real_samples(11, 6.0)).unwrap();
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn strip_is_enforced() {
        let cfg = DilogConfig::default();
        assert!(matches!(phi_eval(&cfg, c(0.0, 4.5)), Err(Error::OutsideStrip(_))));
        assert!(matches!(phi_eval(&cfg, c(0.0, -4.5)), Err(Error::OutsideStrip(_))));
        assert!(phi_eval(&cfg, c(0.0, 4.4)).is_ok());
    }

    #[test]
    fn zero_and_pole_of_continuation() {
        let cfg = DilogConfig::default();
        let t = PI * (1.0 + cfg.hbar);
        assert!(phi_continue(&cfg, c(0.0, t)).unwrap().norm() < 1e-10);
        assert!(matches!(phi_continue(&cfg, c(0.0, -t)), Err(Error::NearPole(_))));
    }

    #[test]
    fn psi_functional_equation() {
        let cfg = DilogConfig::default();
        let q = c(0.3, 0.4);
        assert_eq!(psi_eval(&cfg, q, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        for z in [c(0.7, -0.2), c(-1.3, 2.0), c(3.0, 0.5)] {
            let lhs = psi_eval(&cfg, q, q * q * z).unwrap();
            let rhs = (1.0 + q * z) * psi_eval(&cfg, q, z).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
        assert!(matches!(psi_eval(&cfg, q, -1.0 / q), Err(Error::NearPole(_))));
    }

    #[test]
    fn ratio_relation_at_complex_h() {
        let cfg = DilogConfig::default();
        for z in [c(0.1, 0.0), c(0.0, 0.0), c(-0.8, 0.3)] {
            let r = check_ratio_relation(&cfg, c(0.4, 0.3), z).unwrap();
            assert!(r < 1e-6, "z={z}: {r}");
        }
    }

    #[test]
    fn detour_changes_by_the_residue() {
        let cfg = DilogConfig::default();
        let zs = [c(0.0, 0.0), c(1.5, 0.0), c(-0.7, 0.9)];
        let (diff, pred) = check_detour(&cfg, &zs).unwrap();
        assert!(!diff.passes());
        assert!(pred.passes(), "{pred:?}");
    }

    #[test]
    fn finer_quadrature_is_more_accurate() {
        let xs = real_samples(5, 4.0);
        let coarse = DilogConfig {
            nodes: 3,
            ..DilogConfig::default()
        };
        let fine = DilogConfig {
            nodes: 6,
            ..DilogConfig::default()
        };
        let rc = check_functional_equations(&coarse, &xs).unwrap().max_residual;
        let rf = check_functional_equations(&fine, &xs).unwrap().max_residual;
        assert!(rf < 1e-3 * rc, "{rf} vs {rc}");
    }

    #[test]
    fn identities_at_default_accuracy() {
        let cfg = DilogConfig::default();
        let xs = real_samples(7, 3.0);
        let zs = [c(0.4, 0.0), c(-1.1, 1.2), c(2.0, -2.5)];
        for r in [
            check_involutivity(&cfg, &zs).unwrap(),
            check_duality(&cfg, &zs).unwrap(),
            check_functional_equations(&cfg, &xs).unwrap(),
        ] {
            assert!(r.passes(), "{r:?}");
        }
    }

    #[test]
    fn shift_products() {
        let cfg = DilogConfig::default();
        let xs = real_samples(3, 1.0);
        for m in [-3, -2, -1, 1, 2, 3] {
            let r = check_shift_products(&cfg, m, &xs).unwrap();
            assert!(r.passes(), "{r:?}");
        }
    }
}
