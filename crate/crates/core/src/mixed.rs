//! Mixed continuous/discrete laws and density handles.
//!
//! A [`MixedDistribution`] is an absolutely continuous density on
//! `[support_lo, continuous_upper)` plus a finite, sorted list of point
//! masses. Atoms are carried symbolically so that normalization and KS
//! comparisons stay exact at the jump. The Heaviside convention is
//! `H(0) = 1`: CDFs are right-continuous and include an atom at its own
//! location.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::oracle::{self, ExpTail, QuadratureError, QuadratureResult};
use crate::scalar::Scalar;

/// Shared, thread-safe evaluation handle `x ↦ value`.
pub type Handle<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Tolerance used when a CDF has to fall back to quadrature.
const CDF_QUAD_TOL: f64 = 1e-12;

/// Mass left beyond a density's cutoff.
pub const DENSITY_CUTOFF_MASS: f64 = 1e-12;

/// Right-continuous cumulative distribution function.
pub trait Cdf<T> {
    fn cdf(&self, x: T) -> T;

    /// Left limit `F(x⁻)`; differs from [`Cdf::cdf`] only at atoms.
    fn cdf_left(&self, x: T) -> T {
        self.cdf(x)
    }
}

impl<T, F: Fn(T) -> T> Cdf<T> for F {
    fn cdf(&self, x: T) -> T {
        self(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom<T> {
    pub location: T,
    pub mass: T,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MixedDistError {
    #[error("atom mass {mass} at {location} outside (0, 1]")]
    AtomMass { location: f64, mass: f64 },
    #[error("atom at {location} lies below the support lower bound {support_lo}")]
    AtomBelowSupport { location: f64, support_lo: f64 },
    #[error("atom locations must be distinct, {0} repeated")]
    DuplicateAtom(f64),
    #[error("support bounds invalid: lo {lo}, continuous upper {hi}")]
    Support { lo: f64, hi: f64 },
    #[error("unbounded continuous part requires a tail bound")]
    MissingTail,
}

fn f64_of<T: Scalar>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone)]
pub struct MixedDistribution<T> {
    description: String,
    support_lo: T,
    continuous_upper: T,
    density: Handle<T>,
    continuous_cdf: Option<Handle<T>>,
    atoms: Vec<Atom<T>>,
    breakpoints: Vec<T>,
    tail: Option<ExpTail<T>>,
}

impl<T: Scalar> fmt::Debug for MixedDistribution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MixedDistribution")
            .field("description", &self.description)
            .field("support_lo", &self.support_lo)
            .field("continuous_upper", &self.continuous_upper)
            .field("atoms", &self.atoms)
            .field("closed_form_cdf", &self.continuous_cdf.is_some())
            .finish()
    }
}

pub struct MixedDistributionBuilder<T> {
    inner: MixedDistribution<T>,
}

impl<T: Scalar> MixedDistributionBuilder<T> {
    /// The continuous density vanishes at and above `hi`.
    pub fn continuous_upper(mut self, hi: T) -> Self {
        self.inner.continuous_upper = hi;
        self
    }

    /// Closed form of `∫_{support_lo}^{x} density` for `x` in the continuous range.
    pub fn continuous_cdf(mut self, cdf: Handle<T>) -> Self {
        self.inner.continuous_cdf = Some(cdf);
        self
    }

    /// Adds a point mass. Zero masses are dropped.
    pub fn atom(mut self, location: T, mass: T) -> Self {
        if mass != T::zero() {
            self.inner.atoms.push(Atom { location, mass });
        }
        self
    }

    pub fn breakpoint(mut self, x: T) -> Self {
        self.inner.breakpoints.push(x);
        self
    }

    pub fn tail(mut self, tail: ExpTail<T>) -> Self {
        self.inner.tail = Some(tail);
        self
    }

    pub fn build(self) -> Result<MixedDistribution<T>, MixedDistError> {
        let mut d = self.inner;
        if !(d.support_lo.is_finite() && d.continuous_upper >= d.support_lo) {
            return Err(MixedDistError::Support { lo: f64_of(d.support_lo), hi: f64_of(d.continuous_upper) });
        }
        if d.continuous_upper.is_infinite() && d.tail.is_none() {
            return Err(MixedDistError::MissingTail);
        }
        for a in &d.atoms {
            if !(a.mass > T::zero() && a.mass <= T::one()) {
                return Err(MixedDistError::AtomMass { location: f64_of(a.location), mass: f64_of(a.mass) });
            }
            if !(a.location >= d.support_lo) {
                return Err(MixedDistError::AtomBelowSupport {
                    location: f64_of(a.location),
                    support_lo: f64_of(d.support_lo),
                });
            }
        }
        d.atoms.sort_by(|x, y| x.location.partial_cmp(&y.location).expect("finite atoms"));
        if let Some(w) = d.atoms.windows(2).find(|w| w[0].location == w[1].location) {
            return Err(MixedDistError::DuplicateAtom(f64_of(w[0].location)));
        }
        if d.continuous_upper.is_finite() && d.continuous_upper > d.support_lo {
            d.breakpoints.push(d.continuous_upper);
        }
        d.breakpoints.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
        d.breakpoints.dedup();
        Ok(d)
    }
}

impl<T: Scalar> MixedDistribution<T> {
    pub fn builder(
        description: impl Into<String>,
        support_lo: T,
        density: Handle<T>,
    ) -> MixedDistributionBuilder<T> {
        MixedDistributionBuilder {
            inner: MixedDistribution {
                description: description.into(),
                support_lo,
                continuous_upper: T::infinity(),
                density,
                continuous_cdf: None,
                atoms: Vec::new(),
                breakpoints: Vec::new(),
                tail: None,
            },
        }
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn support_lo(&self) -> T {
        self.support_lo
    }

    pub fn continuous_upper(&self) -> T {
        self.continuous_upper
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn tail(&self) -> Option<ExpTail<T>> {
        self.tail
    }

    pub fn has_closed_form_cdf(&self) -> bool {
        self.continuous_cdf.is_some()
    }

    /// Density of the absolutely continuous part; 0 outside
    /// `[support_lo, continuous_upper)`.
    pub fn continuous_pdf_at(&self, x: T) -> T {
        if x >= self.support_lo && x < self.continuous_upper {
            (self.density)(x)
        } else {
            T::zero()
        }
    }

    /// Mass of the atom located exactly at `x`, else 0.
    pub fn atom_mass_at(&self, x: T) -> T {
        self.atoms.iter().find(|a| a.location == x).map_or(T::zero(), |a| a.mass)
    }

    pub fn total_atom_mass(&self) -> T {
        self.atoms.iter().fold(T::zero(), |acc, a| acc + a.mass)
    }

    fn integrate_continuous(&self, upto: T, tol: T) -> Result<QuadratureResult<T>, QuadratureError> {
        let hi = upto.min(self.continuous_upper);
        let lo = self.support_lo;
        let f = |x: T| self.continuous_pdf_at(x);
        if hi.is_infinite() {
            let tail = self.tail.expect("checked at construction");
            oracle::integrate_semi_infinite_with_breaks(f, lo, tail, &self.breakpoints, tol)
        } else if hi > lo {
            oracle::integrate_with_breaks(f, lo, hi, &self.breakpoints, tol)
        } else {
            Ok(QuadratureResult { value: T::zero(), abs_error_estimate: T::zero(), evaluations: 1 })
        }
    }

    /// `∫ continuous density` by quadrature, independent of any closed-form CDF.
    pub fn continuous_mass(&self, tol: T) -> Result<QuadratureResult<T>, QuadratureError> {
        self.integrate_continuous(T::infinity(), tol)
    }

    /// Continuous mass plus all atom masses.
    pub fn total_mass(&self, tol: T) -> Result<T, QuadratureError> {
        Ok(self.continuous_mass(tol)?.value + self.total_atom_mass())
    }

    /// `E[X]` by quadrature over the continuous part plus exact atom terms.
    pub fn mean(&self, tol: T) -> Result<T, QuadratureError> {
        let lo = self.support_lo;
        let f = |x: T| x * self.continuous_pdf_at(x);
        let cont = if self.continuous_upper.is_infinite() {
            let tail = self.tail.expect("checked at construction").times_linear(lo);
            oracle::integrate_semi_infinite_with_breaks(f, lo, tail, &self.breakpoints, tol)?.value
        } else if self.continuous_upper > lo {
            oracle::integrate_with_breaks(f, lo, self.continuous_upper, &self.breakpoints, tol)?.value
        } else {
            T::zero()
        };
        Ok(self.atoms.iter().fold(cont, |acc, a| acc + a.location * a.mass))
    }

    fn continuous_cdf_at(&self, x: T) -> T {
        let upto = x.min(self.continuous_upper);
        match &self.continuous_cdf {
            Some(c) => c(upto),
            None => match self.integrate_continuous(upto, T::lit(CDF_QUAD_TOL)) {
                Ok(r) => r.value,
                Err(QuadratureError::NoConvergence { value, .. }) => T::lit(value),
                Err(e) => panic!("continuous density not integrable: {e}"),
            },
        }
    }
}

impl<T: Scalar> Cdf<T> for MixedDistribution<T> {
    /// `∫_{lo}^{x} density + Σ_{atoms ≤ x} mass`; 0 below the support.
    fn cdf(&self, x: T) -> T {
        if x.is_nan() || x < self.support_lo {
            return T::zero();
        }
        let atoms = self.atoms.iter().take_while(|a| a.location <= x).fold(T::zero(), |acc, a| acc + a.mass);
        (self.continuous_cdf_at(x) + atoms).max(T::zero()).min(T::one())
    }

    fn cdf_left(&self, x: T) -> T {
        (self.cdf(x) - self.atom_mass_at(x)).max(T::zero())
    }
}

/// Density handle with the metadata quadrature needs: support lower
/// bound, interior breakpoints and a certified exponential envelope.
///
/// Evaluation is 0 below `support_lo` and above the cutoff where the
/// envelope leaves less than [`DENSITY_CUTOFF_MASS`].
#[derive(Clone)]
pub struct Density<T> {
    label: String,
    support_lo: T,
    cutoff: T,
    breakpoints: Vec<T>,
    tail: ExpTail<T>,
    f: Handle<T>,
}

impl<T: Scalar> fmt::Debug for Density<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Density")
            .field("label", &self.label)
            .field("support_lo", &self.support_lo)
            .field("cutoff", &self.cutoff)
            .field("tail", &self.tail)
            .finish()
    }
}

impl<T: Scalar> Density<T> {
    /// `tail` bounds `f(x) ≤ scale · e^{−rate (x − support_lo)}`.
    pub fn new(
        label: impl Into<String>,
        support_lo: T,
        tail: ExpTail<T>,
        breakpoints: Vec<T>,
        f: Handle<T>,
    ) -> Self {
        let cutoff = support_lo + tail.truncation_offset(T::lit(DENSITY_CUTOFF_MASS));
        Self { label: label.into(), support_lo, cutoff, breakpoints, tail, f }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn support_lo(&self) -> T {
        self.support_lo
    }

    pub fn cutoff(&self) -> T {
        self.cutoff
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn tail(&self) -> ExpTail<T> {
        self.tail
    }

    pub fn eval(&self, x: T) -> T {
        if x < self.support_lo || x > self.cutoff || x.is_nan() {
            T::zero()
        } else {
            (self.f)(x)
        }
    }

    /// Evaluates on every grid point.
    pub fn sample(&self, grid: &[T]) -> Vec<T> {
        grid.iter().map(|&x| self.eval(x)).collect()
    }
}
