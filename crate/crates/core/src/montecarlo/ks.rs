//! Two-sided Kolmogorov–Smirnov distance against a CDF that may have atoms.

use crate::mixed::Cdf;
use crate::montecarlo::EmpiricalDistribution;
use crate::scalar::Scalar;

/// `sup |F_n − F|`, checked at every distinct sample value `v` both at `v`
/// (`F_n(v)` vs `F(v)`) and just below it (`F_n(v⁻)` vs `F(v⁻)`).
///
/// Between consecutive sample values `F_n` is constant and `F` monotone, so
/// these endpoint comparisons attain the supremum.
pub fn ks_statistic<T: Scalar, C: Cdf<T> + ?Sized>(emp: &EmpiricalDistribution<T>, theory: &C) -> T {
    let s = emp.sorted_samples();
    let n = T::from_count(s.len());
    let mut d = T::zero();
    let mut i = 0;
    while i < s.len() {
        let v = s[i];
        let j = i + s[i..].partition_point(|&x| x == v);
        let below = T::from_count(i) / n;
        let at = T::from_count(j) / n;
        d = d.max((below - theory.cdf_left(v)).abs()).max((at - theory.cdf(v)).abs());
        i = j;
    }
    d
}
