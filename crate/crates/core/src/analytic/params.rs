use crate::analytic::AnalyticError;
use crate::scalar::Scalar;

/// Model constants of one underlay scenario.
///
/// `p` and `q` are the SU peak power and the interference temperature
/// (linear scale), `sigma2` the AWGN variance, `lambda1` / `lambda2` the
/// rates of the exponential PU→PBS and SU→PBS channel power gains, and
/// `n_su` the number of interfering SUs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams<T> {
    p: T,
    q: T,
    sigma2: T,
    lambda1: T,
    lambda2: T,
    n_su: u32,
}

fn positive<T: Scalar>(field: &'static str, v: T) -> Result<T, AnalyticError> {
    if v > T::zero() && v.is_finite() {
        Ok(v)
    } else {
        Err(AnalyticError::InvalidParameter { field, value: v.to_f64().unwrap_or(f64::NAN) })
    }
}

impl<T: Scalar> ScenarioParams<T> {
    pub fn new(p: T, q: T, sigma2: T, lambda1: T, lambda2: T, n_su: u32) -> Result<Self, AnalyticError> {
        if n_su < 1 {
            return Err(AnalyticError::InvalidParameter { field: "n_su", value: f64::from(n_su) });
        }
        Ok(Self {
            p: positive("p", p)?,
            q: positive("q", q)?,
            sigma2: positive("sigma2", sigma2)?,
            lambda1: positive("lambda1", lambda1)?,
            lambda2: positive("lambda2", lambda2)?,
            n_su,
        })
    }

    /// `λ₁ = λ₂ = σ² = 1`, the setting of the unit-rate closed forms.
    pub fn unit_rate(p: T, q: T, n_su: u32) -> Result<Self, AnalyticError> {
        Self::new(p, q, T::one(), T::one(), T::one(), n_su)
    }

    pub fn p(&self) -> T {
        self.p
    }
    pub fn q(&self) -> T {
        self.q
    }
    pub fn sigma2(&self) -> T {
        self.sigma2
    }
    pub fn lambda1(&self) -> T {
        self.lambda1
    }
    pub fn lambda2(&self) -> T {
        self.lambda2
    }
    pub fn n_su(&self) -> u32 {
        self.n_su
    }

    /// Scaled SU rate `λ₂ / p`.
    pub fn lambda_bar(&self) -> T {
        self.lambda2 / self.p
    }

    /// Scaled PU rate `λ₁ / p`.
    pub fn lambda1_bar(&self) -> T {
        self.lambda1 / self.p
    }

    /// Location of the point mass of the noise-plus-interference law.
    pub fn cap_location(&self) -> T {
        self.sigma2 + self.q
    }

    pub fn is_unit_rate(&self) -> bool {
        self.lambda1 == T::one() && self.lambda2 == T::one() && self.sigma2 == T::one()
    }

    pub(crate) fn require_unit_rate(&self, operation: &'static str) -> Result<(), AnalyticError> {
        if self.is_unit_rate() {
            Ok(())
        } else {
            Err(AnalyticError::RequiresUnitRate { operation })
        }
    }

    pub fn with_p(self, p: T) -> Result<Self, AnalyticError> {
        Self::new(p, self.q, self.sigma2, self.lambda1, self.lambda2, self.n_su)
    }

    pub fn with_q(self, q: T) -> Result<Self, AnalyticError> {
        Self::new(self.p, q, self.sigma2, self.lambda1, self.lambda2, self.n_su)
    }

    pub fn with_n_su(self, n_su: u32) -> Result<Self, AnalyticError> {
        Self::new(self.p, self.q, self.sigma2, self.lambda1, self.lambda2, n_su)
    }
}

/// Peak-power adaptation: the SU transmits `min{p, q/α}`.
pub fn su_transmit_power<T: Scalar>(alpha: T, params: &ScenarioParams<T>) -> T {
    params.p.min(params.q / alpha)
}

/// A theoretical curve evaluated on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCurve<T> {
    label: String,
    grid: Vec<T>,
    values: Vec<T>,
}

impl<T: Scalar> DensityCurve<T> {
    pub fn new(label: impl Into<String>, grid: Vec<T>, values: Vec<T>) -> Result<Self, AnalyticError> {
        let label = label.into();
        if grid.len() != values.len() {
            return Err(AnalyticError::Curve(format!(
                "{label}: {} grid points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(AnalyticError::Curve(format!("{label}: grid not strictly increasing")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(AnalyticError::Curve(format!("{label}: non-finite value at index {i}")));
        }
        Ok(Self { label, grid, values })
    }

    /// Evaluates `f` on `grid`.
    pub fn tabulate(
        label: impl Into<String>,
        grid: Vec<T>,
        f: impl Fn(T) -> T,
    ) -> Result<Self, AnalyticError> {
        let values = grid.iter().map(|&x| f(x)).collect();
        Self::new(label, grid, values)
    }

    /// Evaluates a fallible `f` on `grid`, stopping at the first error.
    pub fn try_tabulate(
        label: impl Into<String>,
        grid: Vec<T>,
        f: impl Fn(T) -> Result<T, AnalyticError>,
    ) -> Result<Self, AnalyticError> {
        let values = grid.iter().map(|&x| f(x)).collect::<Result<_, _>>()?;
        Self::new(label, grid, values)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn grid(&self) -> &[T] {
        &self.grid
    }
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.grid.iter().copied().zip(self.values.iter().copied())
    }
}

/// `steps` equally spaced points from `a` to `b` inclusive.
pub fn linspace<T: Scalar>(a: T, b: T, steps: usize) -> Vec<T> {
    match steps {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let h = (b - a) / T::from_count(steps - 1);
            (0..steps).map(|i| if i + 1 == steps { b } else { a + h * T::from_count(i) }).collect()
        }
    }
}
