//! Closed-form quantities: the generalized Singleton radius, entropy
//! functions, the list-decoding capacity check, Chernoff and binomial-sum
//! estimates, and exponent tables for plotting.
//!
//! Everything here is a pure function in double precision with the
//! `0 * log 0 = 0` convention, except binomial sums, which are exact.

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

/// Largest `n` accepted by [`binomial_entropy_bounds`]; `sum_i C(64, i) = 2^64` still fits in `u128`.
pub const BINOMIAL_N_CAP: usize = 64;

/// `L/(L+1) * (1 - R - eps)`.
pub fn generalized_singleton_radius(list_size: usize, rate: f64, eps: f64) -> Result<f64> {
    if list_size == 0 {
        return input("list size L must be at least 1");
    }
    if !(rate >= 0.0 && eps >= 0.0 && rate + eps <= 1.0) {
        return input(format!("need R, eps >= 0 and R + eps <= 1 (R = {rate}, eps = {eps})"));
    }
    let l = list_size as f64;
    Ok(l / (l + 1.0) * (1.0 - rate - eps))
}

fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Binary entropy `h(x) = -x log x - (1-x) log(1-x)`, logs base 2.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return input(format!("entropy argument {x} outside [0, 1]"));
    }
    Ok(-xlogx(x) - xlogx(1.0 - x))
}

/// q-ary entropy `h_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x)`.
pub fn q_ary_entropy(q: u64, x: f64) -> Result<f64> {
    if q < 2 {
        return input(format!("alphabet size must be at least 2, got {q}"));
    }
    if !(0.0..=1.0).contains(&x) {
        return input(format!("entropy argument {x} outside [0, 1]"));
    }
    let log2q = (q as f64).log2();
    Ok((x * ((q - 1) as f64).log2() - xlogx(x) - xlogx(1.0 - x)) / log2q)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub list_size: usize,
    pub rate: f64,
    pub eps: f64,
    pub q: u64,
    pub n: usize,
}

impl BoundParams {
    pub fn radius(&self) -> Result<f64> {
        generalized_singleton_radius(self.list_size, self.rate, self.eps)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityVerdict {
    Consistent,
    ViolatesCapacity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub radius: f64,
    pub entropy: f64,
    pub capacity: f64,
    /// `h_q(p) - (1 - R)`; positive means the radius exceeds capacity.
    pub margin: f64,
    pub verdict: CapacityVerdict,
    pub note: String,
}

/// Compares `h_q(p)` against `1 - R`. The `o(1)` slack is reported, not enforced.
pub fn capacity_check(params: &BoundParams) -> Result<CapacityReport> {
    let radius = params.radius()?;
    let entropy = q_ary_entropy(params.q, radius)?;
    let capacity = 1.0 - params.rate;
    let margin = entropy - capacity;
    let verdict = if margin > 0.0 { CapacityVerdict::ViolatesCapacity } else { CapacityVerdict::Consistent };
    let shape = if params.eps > 0.0 {
        let inv = 1.0 / params.eps;
        format!("min(L, 1/eps) = {}", fmt_num((params.list_size as f64).min(inv)))
    } else {
        format!("min(L, 1/eps) = {} (eps = 0)", params.list_size)
    };
    let note = format!(
        "capacity needs h_q(p) <= 1 - R + o(1); this forces q >= 2^(Omega_R(min(L, 1/eps))), here {shape}; \
         margin excludes the o(1) term"
    );
    Ok(CapacityReport { radius, entropy, capacity, margin, verdict, note })
}

fn fmt_num(x: f64) -> String {
    if x.is_finite() && x.fract() == 0.0 {
        format!("{}", x as i64)
    } else {
        format!("{x:.6}")
    }
}

/// `exp(-delta^2 / (2 + delta) * alpha * m)`, the binomial upper-tail bound for
/// `Pr[Bin(alpha, m) > (1 + delta) alpha m]`.
pub fn chernoff_tail(alpha: f64, m: u64, delta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return input(format!("alpha = {alpha} outside (0, 1]"));
    }
    if m == 0 {
        return input("number of trials m must be at least 1");
    }
    if delta.is_nan() || delta <= 0.0 {
        return input(format!("delta = {delta} must be positive"));
    }
    Ok((-delta * delta / (2.0 + delta) * alpha * m as f64).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinomialBounds {
    pub n: usize,
    /// `floor(alpha * n)`.
    pub r: usize,
    /// `C(n, r)`.
    pub central: u128,
    /// `sum_{i <= r} C(n, i)`.
    pub exact_sum: u128,
    /// `2^(h(alpha) n)`.
    pub upper: f64,
    /// `2^(h(alpha) n) / (n + 1)`; display only, the sandwich's lower side has an unquantified `o(n)`.
    pub lower_estimate: f64,
}

impl BinomialBounds {
    /// The asserted half of the sandwich: `C(n, r) <= sum <= 2^(h(alpha) n)`; the upper side needs `alpha <= 1/2`.
    pub fn sandwich_holds(&self) -> bool {
        self.central <= self.exact_sum && (self.exact_sum as f64) <= self.upper * (1.0 + 1e-12)
    }
}

/// Exact `C(n, k)` by Pascal recurrence on a single row.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] += row[j - 1];
        }
    }
    row[k]
}

pub fn binomial_entropy_bounds(n: usize, alpha: f64) -> Result<BinomialBounds> {
    if n > BINOMIAL_N_CAP {
        return Err(Error::Resource(format!("n = {n} exceeds exact binomial cap {BINOMIAL_N_CAP}")));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return input(format!("alpha = {alpha} outside [0, 1]"));
    }
    let r = ((alpha * n as f64) + 1e-9).floor() as usize;
    let r = r.min(n);
    let mut row = vec![0u128; n + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=i).rev() {
            row[j] += row[j - 1];
        }
    }
    let exact_sum = row[..=r].iter().sum();
    let upper = (binary_entropy(alpha)? * n as f64).exp2();
    Ok(BinomialBounds { n, r, central: row[r], exact_sum, upper, lower_estimate: upper / (n as f64 + 1.0) })
}

/// One row of the exponent table. The unknown constant in front of the
/// exponent is never filled in; only the exponent shapes are reported.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    #[serde(rename = "L")]
    pub list_size: usize,
    #[serde(rename = "R")]
    pub rate: f64,
    pub eps: f64,
    /// Generalized Singleton radius `p`.
    pub p: f64,
    /// Exponent shape of the list-size-independent bound, `1/eps`.
    pub inv_eps: f64,
    /// Exponent shape of the capacity-based bound, `min(L, 1/eps)`.
    pub min_l_inv_eps: f64,
}

pub const BOUND_TABLE_COLUMNS: &str = "L: list size; R: rate; eps: gap to the radius; p: L/(L+1)(1-R-eps); \
inv_eps: 1/eps (exponent shape of the alphabet lower bound, constant omitted); \
min_l_inv_eps: min(L, 1/eps) (exponent shape of the capacity bound)";

pub fn theorem_bound_table(grid: &[(usize, f64, f64)]) -> Result<Vec<BoundRow>> {
    grid.iter()
        .map(|&(list_size, rate, eps)| {
            let p = generalized_singleton_radius(list_size, rate, eps)?;
            let inv_eps = if eps > 0.0 { 1.0 / eps } else { f64::INFINITY };
            Ok(BoundRow { list_size, rate, eps, p, inv_eps, min_l_inv_eps: (list_size as f64).min(inv_eps) })
        })
        .collect()
}

pub fn bound_table_to_csv(rows: &[BoundRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Internal(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

pub fn bound_table_from_csv(text: &str) -> Result<Vec<BoundRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<BoundRow>, _>>()
        .map_err(|e| Error::Parse { line: e.position().map_or(0, |p| p.line() as usize), message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn singleton_radius_examples() {
        for r in [0.1, 0.25, 0.5, 0.9] {
            assert!((generalized_singleton_radius(1, r, 0.0).unwrap() - (1.0 - r) / 2.0).abs() < TOL);
            assert!((generalized_singleton_radius(2, r, 0.0).unwrap() - 2.0 / 3.0 * (1.0 - r)).abs() < TOL);
        }
        assert!((generalized_singleton_radius(2, 1.0 / 3.0, 1.0 / 6.0).unwrap() - 1.0 / 3.0).abs() < TOL);
        assert!(generalized_singleton_radius(0, 0.5, 0.0).is_err());
        assert!(generalized_singleton_radius(2, 0.8, 0.3).is_err());
        assert!(generalized_singleton_radius(2, -0.1, 0.0).is_err());
    }

    #[test]
    fn singleton_radius_monotone_in_list_size() {
        let (r, eps) = (0.3, 0.05);
        let limit = 1.0 - r - eps;
        let mut prev = 0.0;
        for l in 1..=100 {
            let p = generalized_singleton_radius(l, r, eps).unwrap();
            assert!(p > prev && p < limit);
            prev = p;
        }
        assert!(limit - prev < limit / 100.0);
    }

    #[test]
    fn entropy_examples() {
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < TOL);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let x: f64 = 0.25;
        let direct = -x * x.log2() - (1.0 - x) * (1.0 - x).log2();
        assert!((binary_entropy(x).unwrap() - direct).abs() < 1e-12);
        assert!((binary_entropy(x).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-12);
        assert!((q_ary_entropy(2, 0.5).unwrap() - 1.0).abs() < TOL);
        assert_eq!(q_ary_entropy(7, 0.0).unwrap(), 0.0);
        assert!((q_ary_entropy(4, 0.75).unwrap() - 1.0).abs() < TOL);
        assert!(q_ary_entropy(2, 1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn capacity_examples() {
        let base = BoundParams { list_size: 2, rate: 0.5, eps: 0.0, q: 2, n: 30 };
        let r = capacity_check(&base).unwrap();
        assert!((r.radius - 1.0 / 3.0).abs() < TOL);
        assert!((r.entropy - 0.918_295_834_054_489_6).abs() < 1e-9);
        assert_eq!(r.verdict, CapacityVerdict::ViolatesCapacity);

        let r = capacity_check(&BoundParams { q: 64, ..base }).unwrap();
        let h64 = (1.0 / 3.0 * 63f64.log2() + 0.918_295_834_054_489_6) / 6.0;
        assert!((r.entropy - h64).abs() < 1e-9);
        assert_eq!(r.verdict, CapacityVerdict::Consistent);

        let r = capacity_check(&BoundParams { list_size: 1, rate: 1.0, eps: 0.0, q: 5, n: 10 }).unwrap();
        assert_eq!(r.radius, 0.0);
        assert_eq!(r.verdict, CapacityVerdict::Consistent);
        assert!(r.note.contains("min(L, 1/eps)"));
    }

    #[test]
    fn chernoff_examples() {
        let v = chernoff_tail(0.5, 100, 1.0).unwrap();
        assert!((v - (-100.0f64 / 6.0).exp()).abs() < 1e-15);
        assert!((chernoff_tail(1.0, 12, 1.0).unwrap() - (-4.0f64).exp()).abs() < 1e-15);
        assert!(chernoff_tail(0.5, 0, 1.0).is_err());
        assert!(chernoff_tail(0.0, 10, 1.0).is_err());
        assert!(chernoff_tail(0.5, 10, 0.0).is_err());
    }

    #[test]
    fn binomial_examples() {
        let b = binomial_entropy_bounds(10, 0.5).unwrap();
        assert_eq!(b.exact_sum, 638);
        assert_eq!(b.central, 252);
        assert!((b.upper - 1024.0).abs() < 1e-9);
        assert!(b.sandwich_holds());
        assert_eq!(binomial_entropy_bounds(9, 0.0).unwrap().exact_sum, 1);
        assert_eq!(binomial_entropy_bounds(4, 1.0).unwrap().exact_sum, 16);
        assert_eq!(binomial_entropy_bounds(64, 1.0).unwrap().exact_sum, 1u128 << 64);
        assert!(matches!(binomial_entropy_bounds(65, 0.5), Err(Error::Resource(_))));
    }

    #[test]
    fn binomial_sandwich_small_n() {
        // The upper side of the sandwich needs alpha <= 1/2.
        for n in 1..=30 {
            for i in 0..=n / 2 {
                let b = binomial_entropy_bounds(n, i as f64 / n as f64).unwrap();
                assert_eq!(b.r, i);
                assert_eq!(b.central, binomial(n, i));
                assert!(b.sandwich_holds(), "n={n} i={i}: {b:?}");
            }
        }
    }

    #[test]
    fn table_examples() {
        let rows = theorem_bound_table(&[(2, 0.5, 0.1), (3, 0.5, 0.5), (2, 0.25, 0.0), (4, 0.1, 0.2)]).unwrap();
        assert_eq!(rows.len(), 4);
        assert!((rows[0].inv_eps - 10.0).abs() < TOL);
        assert!((rows[1].min_l_inv_eps - 2.0).abs() < TOL);
        assert!(rows[2].inv_eps.is_infinite());
        assert_eq!(rows[2].min_l_inv_eps, 2.0);
        let csv = bound_table_to_csv(&rows).unwrap();
        assert_eq!(csv.lines().count(), 5);
        assert!(csv.starts_with("L,R,eps,p,inv_eps,min_l_inv_eps\n"));
        assert_eq!(bound_table_from_csv(&csv).unwrap(), rows);
    }

    proptest! {
        #[test]
        fn q_ary_entropy_is_concave(q in 2u64..300, x in 0.0f64..=1.0, y in 0.0f64..=1.0, lam in 0.0f64..=1.0) {
            let mid = q_ary_entropy(q, lam * x + (1.0 - lam) * y).unwrap();
            let chord = lam * q_ary_entropy(q, x).unwrap() + (1.0 - lam) * q_ary_entropy(q, y).unwrap();
            prop_assert!(mid >= chord - 1e-12);
        }

        #[test]
        fn q_ary_entropy_peaks_at_one(q in 2u64..1000) {
            let top = q_ary_entropy(q, (q - 1) as f64 / q as f64).unwrap();
            prop_assert!((top - 1.0).abs() < 1e-9);
        }
    }
}
