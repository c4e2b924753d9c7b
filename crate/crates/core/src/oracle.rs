//! Numerical ground truth: adaptive Gauss–Kronrod quadrature, certified
//! semi-infinite truncation, the ratio-of-variables density integral and
//! weighted functionals of densities.
//!
//! Nothing here calls into the closed forms of [`crate::analytic`]; the
//! two sides are meant to be compared against each other.

use thiserror::Error;

use crate::mixed::{Cdf, Density, MixedDistribution};
use crate::scalar::Scalar;

/// Absolute tolerance used when the caller does not pick one.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Tolerance used by [`ratio_density`] for its inner integral.
pub const RATIO_TOL: f64 = 1e-13;

/// Tail mass allowed beyond the truncation point of a semi-infinite integral.
pub const TRUNCATION_EPS: f64 = 1e-14;

/// Subdivision budget of the adaptive driver.
pub const MAX_SUBDIVISIONS: usize = 5_000;

// 15-point Kronrod abscissae / weights and the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub abs_error_estimate: T,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("integrand is not finite at x = {at}")]
    NonFinite { at: f64 },
    #[error("no convergence after {subdivisions} subdivisions (value {value}, error estimate {abs_error_estimate})")]
    NoConvergence { subdivisions: usize, value: f64, abs_error_estimate: f64 },
    #[error("invalid tail bound: scale {scale}, rate {rate}")]
    InvalidTail { scale: f64, rate: f64 },
}

fn f64_of<T: Scalar>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Exponential envelope `|f(x)| ≤ scale · e^{−rate (x − origin)}` for `x ≥ origin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTail<T> {
    pub scale: T,
    pub rate: T,
}

impl<T: Scalar> ExpTail<T> {
    pub fn new(scale: T, rate: T) -> Result<Self, QuadratureError> {
        if !(scale >= T::zero() && scale.is_finite() && rate > T::zero() && rate.is_finite()) {
            return Err(QuadratureError::InvalidTail { scale: f64_of(scale), rate: f64_of(rate) });
        }
        Ok(Self { scale, rate })
    }

    /// Bound on `∫_{origin+t}^∞ |f|`.
    pub fn mass_beyond(&self, t: T) -> T {
        self.scale / self.rate * (-self.rate * t).exp()
    }

    /// Smallest offset `t ≥ 0` with `mass_beyond(t) ≤ eps`.
    pub fn truncation_offset(&self, eps: T) -> T {
        let ratio = self.scale / (self.rate * eps);
        if ratio <= T::one() {
            T::zero()
        } else {
            ratio.ln() / self.rate
        }
    }

    /// Envelope of `x · f(x)` (or `ln(1 + x) · f(x)`) given `x ≥ origin ≥ 0`.
    ///
    /// Uses `(origin + t) e^{−r t} ≤ (origin + 2/(e r)) e^{−r t / 2}`.
    pub fn times_linear(&self, origin: T) -> Self {
        let two = T::lit(2.0);
        Self { scale: self.scale * (origin.abs() + two / (T::E() * self.rate)), rate: self.rate / two }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    splittable: bool,
}

fn gauss_kronrod<T: Scalar, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Result<Panel<T>, QuadratureError> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let eval = |x: T| -> Result<T, QuadratureError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadratureError::NonFinite { at: f64_of(x) })
        }
    };
    let fc = eval(center)?;
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    let mut abs_sum = fc.abs() * T::lit(WGK[7]);
    for j in 0..7 {
        let dx = half_len * T::lit(XGK[j]);
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        kronrod = kronrod + T::lit(WGK[j]) * (f1 + f2);
        abs_sum = abs_sum + T::lit(WGK[j]) * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let value = kronrod * half_len;
    let raw_err = ((kronrod - gauss) * half_len).abs();
    let roundoff = T::lit(50.0) * T::epsilon() * abs_sum * half_len.abs();
    let tiny_width = (b - a).abs() <= T::lit(16.0) * T::epsilon() * (a.abs() + b.abs());
    Ok(Panel { a, b, value, error: raw_err.max(roundoff), splittable: raw_err > roundoff && !tiny_width })
}

/// Global adaptive driver over an initial partition `points` (sorted,
/// at least two entries). The panel with the largest error estimate is
/// bisected until the summed estimate falls below `tol`.
///
/// When every remaining panel is limited by floating-point roundoff the
/// result is returned with its (honest) error estimate even if that
/// exceeds `tol`.
fn adaptive<T: Scalar, F: Fn(T) -> T>(
    f: &F,
    points: &[T],
    tol: T,
) -> Result<QuadratureResult<T>, QuadratureError> {
    let mut panels = Vec::with_capacity(points.len() * 4);
    for w in points.windows(2) {
        if w[1] > w[0] {
            panels.push(gauss_kronrod(f, w[0], w[1])?);
        }
    }
    let mut evaluations = 15 * panels.len();
    loop {
        let (value, error) =
            panels.iter().fold((T::zero(), T::zero()), |(v, e), p| (v + p.value, e + p.error));
        if error <= tol {
            return Ok(QuadratureResult {
                value,
                abs_error_estimate: error,
                evaluations: evaluations.max(1),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.splittable)
            .max_by(|(_, x), (_, y)| x.error.partial_cmp(&y.error).expect("finite errors"))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Ok(QuadratureResult {
                value,
                abs_error_estimate: error,
                evaluations: evaluations.max(1),
            });
        };
        if panels.len() >= MAX_SUBDIVISIONS {
            return Err(QuadratureError::NoConvergence {
                subdivisions: panels.len(),
                value: f64_of(value),
                abs_error_estimate: f64_of(error),
            });
        }
        let p = panels[i];
        let mid = T::lit(0.5) * (p.a + p.b);
        panels[i] = gauss_kronrod(f, p.a, mid)?;
        panels.push(gauss_kronrod(f, mid, p.b)?);
        evaluations += 30;
    }
}

fn check_tol<T: Scalar>(tol: T) -> Result<(), QuadratureError> {
    if tol > T::zero() && tol.is_finite() {
        Ok(())
    } else {
        Err(QuadratureError::InvalidTolerance(f64_of(tol)))
    }
}

fn partition<T: Scalar>(a: T, b: T, breaks: &[T]) -> Vec<T> {
    let mut pts = Vec::with_capacity(breaks.len() + 2);
    pts.push(a);
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
    pts.dedup();
    pts
}

/// `∫_a^b f` to absolute tolerance `tol`.
pub fn integrate<T: Scalar, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    tol: T,
) -> Result<QuadratureResult<T>, QuadratureError> {
    integrate_with_breaks(f, a, b, &[], tol)
}

/// As [`integrate`], with the initial partition split at `breaks`
/// (discontinuities and kinks of the integrand).
pub fn integrate_with_breaks<T: Scalar, F: Fn(T) -> T>(
    f: F,
    a: T,
    b: T,
    breaks: &[T],
    tol: T,
) -> Result<QuadratureResult<T>, QuadratureError> {
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(QuadratureError::InvalidInterval { a: f64_of(a), b: f64_of(b) });
    }
    check_tol(tol)?;
    adaptive(&f, &partition(a, b, breaks), tol)
}

/// `∫_a^∞ f` for an integrand with exponential envelope `tail` (origin `a`).
///
/// The range is cut where the envelope's remaining mass drops to
/// [`TRUNCATION_EPS`]; that bound is added to the error estimate.
pub fn integrate_semi_infinite<T: Scalar, F: Fn(T) -> T>(
    f: F,
    a: T,
    tail: ExpTail<T>,
    tol: T,
) -> Result<QuadratureResult<T>, QuadratureError> {
    integrate_semi_infinite_with_breaks(f, a, tail, &[], tol)
}

pub fn integrate_semi_infinite_with_breaks<T: Scalar, F: Fn(T) -> T>(
    f: F,
    a: T,
    tail: ExpTail<T>,
    breaks: &[T],
    tol: T,
) -> Result<QuadratureResult<T>, QuadratureError> {
    let tail = ExpTail::new(tail.scale, tail.rate)?;
    check_tol(tol)?;
    let eps = T::lit(TRUNCATION_EPS);
    let offset = tail.truncation_offset(eps);
    if offset == T::zero() {
        return Ok(QuadratureResult {
            value: T::zero(),
            abs_error_estimate: tail.mass_beyond(T::zero()),
            evaluations: 1,
        });
    }
    let b = a + offset;
    // a few panels per decay length so the driver starts near the mass
    let decay = T::one() / tail.rate;
    let mut pts: Vec<T> = breaks.to_vec();
    let mut x = a + decay;
    while x < b && pts.len() < 64 {
        pts.push(x);
        x = x + decay;
    }
    let mut r = integrate_with_breaks(f, a, b, &pts, tol)?;
    r.abs_error_estimate = r.abs_error_estimate + tail.mass_beyond(offset);
    Ok(r)
}

/// Weight applied inside [`functional_mean`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// `w(x) = 1`: total mass.
    Unit,
    /// `w(x) = x`: mean.
    Identity,
    /// `w(x) = ln(1 + x)`: mean capacity in nats.
    Log1p,
}

impl Weight {
    fn apply<T: Scalar>(self, x: T) -> T {
        match self {
            Weight::Unit => T::one(),
            Weight::Identity => x,
            Weight::Log1p => x.ln_1p(),
        }
    }
}

/// `∫ w(x) f(x) dx` over the support of `density`.
pub fn functional_mean<T: Scalar>(
    density: &Density<T>,
    weight: Weight,
    tol: T,
) -> Result<QuadratureResult<T>, QuadratureError> {
    let lo = density.support_lo();
    let tail = match weight {
        Weight::Unit => density.tail(),
        Weight::Identity | Weight::Log1p => density.tail().times_linear(lo),
    };
    let mut breaks = density.breakpoints().to_vec();
    breaks.push(density.cutoff());
    integrate_semi_infinite_with_breaks(|x| weight.apply(x) * density.eval(x), lo, tail, &breaks, tol)
}

/// `∫_a^b f` for a density handle, split at its breakpoints.
pub fn integrate_density<T: Scalar>(
    density: &Density<T>,
    a: T,
    b: T,
    tol: T,
) -> Result<QuadratureResult<T>, QuadratureError> {
    let mut breaks = density.breakpoints().to_vec();
    breaks.push(density.cutoff());
    integrate_with_breaks(|x| density.eval(x), a, b, &breaks, tol)
}

/// Density of `X / Y` at `z`, with `X = γ p`, `γ ~ Exp(numerator_rate)`,
/// and `Y ~ denom_law` independent of `X`:
///
/// `f(z) = ∫ y · f_X(y z) dF_Y(y)`, `f_X(x) = (λ/p) e^{−λ x / p}`.
///
/// The continuous part of `denom_law` is integrated numerically (split at
/// every atom); each atom contributes `y · f_X(y z) · mass` exactly.
pub fn ratio_density<T: Scalar>(
    numerator_rate: T,
    p: T,
    denom_law: &MixedDistribution<T>,
    z: T,
) -> Result<T, QuadratureError> {
    let k = numerator_rate / p;
    let kernel = |y: T| y * k * (-k * y * z).exp();
    let atom_part =
        denom_law.atoms().iter().fold(T::zero(), |acc, atom| acc + kernel(atom.location) * atom.mass);
    let lo = denom_law.support_lo();
    let hi = denom_law.continuous_upper();
    let breaks: Vec<T> =
        denom_law.atoms().iter().map(|a| a.location).chain(denom_law.breakpoints().iter().copied()).collect();
    let integrand = |y: T| kernel(y) * denom_law.continuous_pdf_at(y);
    let tol = T::lit(RATIO_TOL);
    let continuous = if hi.is_finite() {
        if hi > lo {
            integrate_with_breaks(integrand, lo, hi, &breaks, tol)?.value
        } else {
            T::zero()
        }
    } else {
        let tail = denom_law.tail().expect("unbounded continuous part carries a tail bound").times_linear(lo);
        integrate_semi_infinite_with_breaks(integrand, lo, tail, &breaks, tol)?.value
    };
    Ok(continuous + atom_part)
}

/// Piecewise cubic Hermite interpolant of a CDF built by panel-wise
/// quadrature of a density. Nodes carry both `F` and `f = F'`.
#[derive(Debug, Clone)]
pub struct CdfTable<T> {
    nodes: Vec<T>,
    cdf: Vec<T>,
    pdf: Vec<T>,
}

impl<T: Scalar> CdfTable<T> {
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn values(&self) -> &[T] {
        &self.cdf
    }
}

impl<T: Scalar> Cdf<T> for CdfTable<T> {
    fn cdf(&self, x: T) -> T {
        let n = self.nodes.len();
        if x.is_nan() || x < self.nodes[0] {
            return T::zero();
        }
        if x >= self.nodes[n - 1] {
            return self.cdf[n - 1];
        }
        let i = self.nodes.partition_point(|&v| v <= x) - 1;
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = two * t3 - three * t2 + T::one();
        let h10 = t3 - two * t2 + t;
        let h01 = -two * t3 + three * t2;
        let h11 = t3 - t2;
        let v = h00 * self.cdf[i] + h10 * h * self.pdf[i] + h01 * self.cdf[i + 1] + h11 * h * self.pdf[i + 1];
        v.max(T::zero()).min(T::one())
    }
}

/// Tabulates `F(x) = ∫_lo^x f` on `intervals` equal panels of
/// `[support_lo, cutoff]` (plus the density's breakpoints).
pub fn cumulative_table<T: Scalar>(
    density: &Density<T>,
    intervals: usize,
    tol: T,
) -> Result<CdfTable<T>, QuadratureError> {
    let lo = density.support_lo();
    let hi = density.cutoff();
    let intervals = intervals.max(1);
    let h = (hi - lo) / T::from_count(intervals);
    let mut nodes: Vec<T> = (0..=intervals).map(|i| lo + h * T::from_count(i)).collect();
    nodes.extend(density.breakpoints().iter().copied().filter(|&b| b > lo && b < hi));
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite nodes"));
    nodes.dedup();
    let panel_tol = tol / T::from_count(nodes.len());
    let mut cdf = Vec::with_capacity(nodes.len());
    let mut acc = T::zero();
    cdf.push(acc);
    for w in nodes.windows(2) {
        acc = acc + integrate(|x| density.eval(x), w[0], w[1], panel_tol)?.value;
        cdf.push(acc);
    }
    let pdf = nodes.iter().map(|&x| density.eval(x)).collect();
    Ok(CdfTable { nodes, cdf, pdf })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixed::MixedDistribution;
    use std::sync::Arc;

    #[test]
    fn exponential_on_finite_range() {
        let r = integrate(|x: f64| (-x).exp(), 0.0, 50.0, 1e-12).unwrap();
        assert!((r.value - (1.0 - (-50.0f64).exp())).abs() < 1e-12);
        assert!(r.abs_error_estimate >= 0.0 && r.evaluations > 0);
    }

    #[test]
    fn semi_infinite_gamma_integrals() {
        let tail = ExpTail::new(1.0, 0.5).unwrap(); // x e^{-x} ≤ e^{-x/2}
        let r = integrate_semi_infinite(|x: f64| x * (-x).exp(), 0.0, tail, 1e-10).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
        // Γ(3) = 2, x² e^{-x} ≤ (16/e²) e^{-x/2}
        let tail = ExpTail::new(16.0 / std::f64::consts::E.powi(2), 0.5).unwrap();
        let r = integrate_semi_infinite(|x: f64| x * x * (-x).exp(), 0.0, tail, 1e-10).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10);
        assert!(r.abs_error_estimate >= tail.mass_beyond(tail.truncation_offset(TRUNCATION_EPS)));
    }

    #[test]
    fn polynomials_exact_to_kronrod_degree() {
        for k in 0..=22i32 {
            let r = integrate(|x: f64| x.powi(k), -1.0, 2.0, 1e-14).unwrap();
            let want = (2f64.powi(k + 1) - (-1f64).powi(k + 1)) / f64::from(k + 1);
            assert!(((r.value - want) / want.abs().max(1.0)).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn single_panel_is_exact_for_gauss_degree() {
        // degree ≤ 13: the embedded rule agrees, one panel suffices
        let r = integrate(|x: f64| 3.0 * x.powi(13) - x.powi(2), 0.0, 1.0, 1e-14).unwrap();
        assert_eq!(r.evaluations, 15);
        assert!((r.value - (3.0 / 14.0 - 1.0 / 3.0)).abs() < 4.0 * f64::EPSILON);
    }

    #[test]
    fn jump_is_resolved_with_breakpoint() {
        let step = |x: f64| if x < 0.3 { 1.0 } else { 0.0 };
        let r = integrate_with_breaks(step, 0.0, 1.0, &[0.3], 1e-14).unwrap();
        assert!((r.value - 0.3).abs() < 1e-15);
    }

    #[test]
    fn failures_are_explicit() {
        assert!(matches!(
            integrate(|x: f64| x, 1.0, 1.0, 1e-10),
            Err(QuadratureError::InvalidInterval { .. })
        ));
        assert!(matches!(integrate(|x: f64| x, 0.0, 1.0, 0.0), Err(QuadratureError::InvalidTolerance(_))));
        assert!(matches!(
            integrate(|x: f64| 1.0 / x, 0.0, 1.0, 1e-10),
            Err(QuadratureError::NonFinite { .. })
        ));
        assert!(ExpTail::new(1.0f64, 0.0).is_err());
    }

    #[test]
    fn oscillation_with_tight_budget_reports_no_convergence() {
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-8, 1.0, 1e-14);
        match r {
            Err(QuadratureError::NoConvergence { subdivisions, abs_error_estimate, .. }) => {
                assert!(subdivisions >= MAX_SUBDIVISIONS);
                assert!(abs_error_estimate > 1e-14);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    fn exp_law(rate: f64) -> MixedDistribution<f64> {
        MixedDistribution::builder("exp", 0.0, Arc::new(move |x: f64| rate * (-rate * x).exp()))
            .tail(ExpTail::new(rate, rate).unwrap())
            .build()
            .unwrap()
    }

    #[test]
    fn ratio_density_at_zero_is_scaled_mean() {
        // z = 0: (λ/p) E[Y]
        let law = exp_law(2.0);
        let v = ratio_density(3.0, 1.5, &law, 0.0).unwrap();
        assert!((v - 2.0 * 0.5).abs() < 1e-12);
    }

    #[test]
    fn ratio_of_exponentials_matches_closed_form() {
        // X ~ Exp(a), Y ~ Exp(b) ⇒ f(z) = a b / (a z + b)²
        let (a, b) = (1.0, 2.0);
        let law = exp_law(b);
        for &z in &[0.0, 0.3, 1.0, 4.0, 20.0] {
            let v = ratio_density(a, 1.0, &law, z).unwrap();
            let want = a * b / (a * z + b).powi(2);
            assert!((v - want).abs() < 1e-11, "z={z}");
        }
    }

    #[test]
    fn hermite_table_reproduces_exponential_cdf() {
        let d =
            Density::new("exp", 0.0, ExpTail::new(1.0, 1.0).unwrap(), vec![], Arc::new(|x: f64| (-x).exp()));
        let table = cumulative_table(&d, 2000, 1e-12).unwrap();
        for &x in &[0.0, 0.01, 0.5, 3.3, 10.0] {
            // Hermite error ≤ h⁴ max|f'''| / 384 ≈ 1e-10 at h ≈ 0.014
            assert!((table.cdf(x) - (1.0 - (-x).exp())).abs() < 2e-10, "x={x}");
        }
        assert_eq!(table.cdf(-1.0), 0.0);
        let m = functional_mean(&d, Weight::Identity, 1e-10).unwrap();
        assert!((m.value - 1.0).abs() < 1e-10);
        let u = functional_mean(&d, Weight::Unit, 1e-12).unwrap();
        assert!((u.value - 1.0).abs() < 1e-11);
    }

    #[test]
    fn log1p_of_point_mass_at_zero_is_zero() {
        // a narrow law hugging 0 has log1p-mean → 0
        let d = Density::new(
            "spike",
            0.0,
            ExpTail::new(1e6, 1e6).unwrap(),
            vec![],
            Arc::new(|x: f64| 1e6 * (-1e6 * x).exp()),
        );
        let r = functional_mean(&d, Weight::Log1p, 1e-12).unwrap();
        assert!(r.value.abs() < 2e-6);
    }
}
