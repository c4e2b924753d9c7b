//! Empirical distributions built from simulated samples.

use crate::mixed::Cdf;
use crate::montecarlo::SimError;
use crate::scalar::Scalar;

/// Equal-width histogram of the non-atomic samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram<T> {
    edges: Vec<T>,
    counts: Vec<usize>,
}

impl<T: Scalar> Histogram<T> {
    pub fn edges(&self) -> &[T] {
        &self.edges
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn bin_centers(&self) -> Vec<T> {
        let half = T::lit(0.5);
        self.edges.windows(2).map(|w| (w[0] + w[1]) * half).collect()
    }

    /// Density estimate per bin, `count / (n · width)`. Normalized by the
    /// full sample size so that bins and atoms together integrate to one.
    pub fn density(&self, n: usize) -> Vec<T> {
        let n = T::from_count(n);
        self.edges
            .windows(2)
            .zip(&self.counts)
            .map(|(w, &c)| T::from_count(c) / (n * (w[1] - w[0])))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomCount<T> {
    pub location: T,
    pub count: usize,
}

/// Sorted samples with a histogram and exact-hit counts at known atoms.
///
/// Every sample lands in exactly one of: a histogram bin, an atom, or the
/// out-of-range count (above the 99.9th-percentile histogram edge), so
/// `Σ counts + Σ atoms + out_of_range = n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution<T> {
    sorted: Vec<T>,
    support_lo: T,
    histogram: Histogram<T>,
    atoms: Vec<AtomCount<T>>,
    out_of_range: usize,
}

fn nearest_rank<T: Copy>(sorted: &[T], prob: f64) -> T {
    let rank = (prob * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

impl<T: Scalar> EmpiricalDistribution<T> {
    /// `atom_locations` are matched by exact equality.
    pub fn new(
        mut samples: Vec<T>,
        support_lo: T,
        atom_locations: &[T],
        bins: usize,
    ) -> Result<Self, SimError> {
        if samples.is_empty() {
            return Err(SimError::Empty);
        }
        if bins == 0 {
            return Err(SimError::InvalidConfig { field: "bins", value: 0 });
        }
        samples.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
        let mut atoms: Vec<AtomCount<T>> =
            atom_locations.iter().map(|&location| AtomCount { location, count: 0 }).collect();
        let is_atom = |x: T| atom_locations.iter().position(|&a| a == x);

        let continuous: Vec<T> = samples.iter().copied().filter(|&x| is_atom(x).is_none()).collect();
        let mut hi = if continuous.is_empty() { support_lo } else { nearest_rank(&continuous, 0.999) };
        if hi <= support_lo {
            hi = continuous.last().copied().unwrap_or(support_lo);
        }
        if hi <= support_lo {
            hi = support_lo + T::one();
        }
        let width = (hi - support_lo) / T::from_count(bins);
        let mut edges: Vec<T> = (0..bins).map(|i| support_lo + width * T::from_count(i)).collect();
        edges.push(hi);

        let mut counts = vec![0usize; bins];
        let mut out_of_range = 0;
        for &x in &samples {
            if let Some(i) = is_atom(x) {
                atoms[i].count += 1;
            } else if x < support_lo || x > hi {
                out_of_range += 1;
            } else {
                let bin = ((x - support_lo) / width).floor().to_usize().unwrap_or(bins);
                counts[bin.min(bins - 1)] += 1;
            }
        }
        Ok(Self { sorted: samples, support_lo, histogram: Histogram { edges, counts }, atoms, out_of_range })
    }

    pub fn n(&self) -> usize {
        self.sorted.len()
    }

    pub fn sorted_samples(&self) -> &[T] {
        &self.sorted
    }

    pub fn support_lo(&self) -> T {
        self.support_lo
    }

    pub fn histogram(&self) -> &Histogram<T> {
        &self.histogram
    }

    pub fn atoms(&self) -> &[AtomCount<T>] {
        &self.atoms
    }

    pub fn out_of_range(&self) -> usize {
        self.out_of_range
    }

    /// Fraction of samples exactly at `location`, if it is a tracked atom.
    pub fn atom_frequency(&self, location: T) -> Option<T> {
        self.atoms
            .iter()
            .find(|a| a.location == location)
            .map(|a| T::from_count(a.count) / T::from_count(self.n()))
    }

    /// Nearest-rank quantile.
    pub fn quantile(&self, prob: f64) -> T {
        nearest_rank(&self.sorted, prob)
    }

    pub fn ecdf(&self, x: T) -> T {
        T::from_count(self.sorted.partition_point(|&s| s <= x)) / T::from_count(self.n())
    }
}

impl<T: Scalar> Cdf<T> for EmpiricalDistribution<T> {
    fn cdf(&self, x: T) -> T {
        self.ecdf(x)
    }

    fn cdf_left(&self, x: T) -> T {
        T::from_count(self.sorted.partition_point(|&s| s < x)) / T::from_count(self.n())
    }
}

/// Fraction of samples strictly below `psi`.
pub fn outage_estimate<T: Scalar>(emp: &EmpiricalDistribution<T>, psi: T) -> Result<T, SimError> {
    if emp.n() == 0 {
        return Err(SimError::Empty);
    }
    Ok(emp.cdf_left(psi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate<T> {
    pub mean: T,
    /// Sample standard deviation over `√n`; infinite for a single sample.
    pub standard_error: T,
}

pub fn mean_estimate<T: Scalar>(emp: &EmpiricalDistribution<T>) -> Result<MeanEstimate<T>, SimError> {
    let n = emp.n();
    if n == 0 {
        return Err(SimError::Empty);
    }
    let nf = T::from_count(n);
    let mean = emp.sorted.iter().fold(T::zero(), |acc, &x| acc + x) / nf;
    if n == 1 {
        return Ok(MeanEstimate { mean, standard_error: T::infinity() });
    }
    let ss = emp.sorted.iter().fold(T::zero(), |acc, &x| acc + (x - mean) * (x - mean));
    let var = ss / T::from_count(n - 1);
    Ok(MeanEstimate { mean, standard_error: (var / nf).sqrt() })
}

/// Capacity samples `ln(1 + z)` in nats, with histogram and atoms mapped.
pub fn capacity_transform<T: Scalar>(
    emp: &EmpiricalDistribution<T>,
) -> Result<EmpiricalDistribution<T>, SimError> {
    let samples = emp.sorted.iter().map(|z| z.ln_1p()).collect();
    let atoms: Vec<T> = emp.atoms.iter().map(|a| a.location.ln_1p()).collect();
    EmpiricalDistribution::new(samples, emp.support_lo.ln_1p(), &atoms, emp.histogram.counts.len())
}
