use serde::{Deserialize, Serialize};

use crate::constructions::union_arity;
use crate::error::{input, Error, Result};
use crate::fraction::{
    ceil_mul, ceil_to_multiple, floor_mul, floor_to_multiple, frac, is_multiple_of, to_f64, Fraction,
};
use crate::model::CoordSet;
use crate::verifier::fraction_serde;

const CHAIN_TOLERANCE: f64 = 1e-12;

/// The five terms of the interval chain
/// `1 - ((1-R)/4)^L / (4L) >= 1 - p^L / (4L(1-p)) >= a_union/(n-pn) >= a_F/(n-pn) >= (L+1)R / (1 + (L+1)R)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalChain {
    pub terms: [f64; 5],
    pub holds: bool,
}

/// Integer parameters of the general attack.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackParams {
    pub n: usize,
    pub list_size: usize,
    /// Rate after rounding down to a multiple of `(L+1)/n`.
    #[serde(with = "fraction_serde")]
    pub rate: Fraction,
    /// Gap after rounding up to a multiple of `(L+1)/n`.
    #[serde(with = "fraction_serde")]
    pub eps: Fraction,
    #[serde(with = "fraction_serde")]
    pub p: Fraction,
    pub pn: usize,
    pub k: usize,
    pub a_f: usize,
    pub a_union: usize,
    pub d0: usize,
    pub d1: usize,
    /// `I_0, I_1, ..., I_L`, consecutive from coordinate 0.
    pub intervals: Vec<CoordSet>,
    pub i_star: CoordSet,
    /// `[n] \ I_*`, the ground set of the family.
    pub ground: CoordSet,
    pub union_arity: usize,
    /// `max(ceil((p + p^L/(2L)) n), n - a_union + 1)`.
    pub required_distance: usize,
    /// `a_union > (1 - p - p^L/(2L)) n`.
    pub a_union_strict: bool,
    pub interval_chain: IntervalChain,
}

/// Rounds `R` down and `eps + (L+1)/n` up to multiples of `(L+1)/n`, then
/// instantiates the parameters.
pub fn derive_params(n: usize, list_size: usize, rate: &Fraction, eps: &Fraction) -> Result<AttackParams> {
    if n == 0 || list_size == 0 {
        return input("need n >= 1 and L >= 1");
    }
    let step = frac(list_size as i128 + 1, n as i128);
    let r = floor_to_multiple(rate, &step);
    let e = ceil_to_multiple(&(eps + step), &step);
    AttackParams::from_multiples(n, list_size, &r, &e)
}

impl AttackParams {
    /// Parameters for `R` and `eps` that are already multiples of `(L+1)/n`.
    pub fn from_multiples(n: usize, list_size: usize, rate: &Fraction, eps: &Fraction) -> Result<Self> {
        let l = list_size;
        let li = l as i128;
        let param = |msg: String| Err(Error::Parameterization(msg));
        if l < 2 {
            return input(format!("the general attack needs L >= 2, got {l}"));
        }
        if n < l + 2 {
            return input(format!("need n >= L + 2 = {}, got {n}", l + 2));
        }
        if *rate <= frac(0, 1) || *rate >= frac(1, 1) {
            return input(format!("rate R = {rate} outside (0, 1)"));
        }
        if *eps < frac(0, 1) || *eps >= frac(1, 1) {
            return input(format!("eps = {eps} outside [0, 1)"));
        }
        let step = frac(li + 1, n as i128);
        if !is_multiple_of(rate, &step) || !is_multiple_of(eps, &step) {
            return param(format!("R = {rate} and eps = {eps} must be multiples of (L+1)/n = {step}"));
        }
        if !n.is_multiple_of(l + 1) {
            return param(format!("n = {n} is not a multiple of L + 1 = {}, so pn is not an integer", l + 1));
        }
        let one = frac(1, 1);
        let nf = frac(n as i128, 1);
        let p = frac(li, li + 1) * (one - rate - eps);
        if p <= frac(0, 1) {
            return param(format!("R + eps = {} leaves no radius", rate + eps));
        }
        let pn = (p * nf).to_integer() as usize;
        let k = (rate * nf).to_integer() as usize;
        if k < 2 {
            return param(format!("k = Rn = {k} leaves no agreement sets (a_F = k - 1 must be positive)"));
        }
        let a_f = k - 1;
        let p_l = p.pow(l as i32);
        let a_union = floor_mul(&(one - p - p_l / frac(4 * li, 1)), n);
        let d1 = (one - rate - eps * frac(5, 1)) * nf / frac(li + 1, 1);
        if d1 < frac(0, 1) {
            return param(format!("d_1 = (1 - R - 5 eps) n / (L+1) = {d1} is negative; eps = {eps} is too large"));
        }
        let d0 = frac(4 * li, li + 1) * eps * nf;
        let (d0, d1) = (d0.to_integer() as usize, d1.to_integer() as usize);
        if d0 + l * d1 != pn {
            return Err(Error::Internal(format!("d_0 + L d_1 = {} differs from pn = {pn}", d0 + l * d1)));
        }
        if (n as i128) - (d0 + d1 + a_f) as i128 > pn as i128 {
            return param(format!(
                "n - d_0 - d_1 - a_F = {} exceeds pn = {pn}; eps = {eps} is too small for n = {n}",
                n as i128 - (d0 + d1 + a_f) as i128
            ));
        }
        if frac(d0 as i128, 1) > frac(4, 1) * eps * nf {
            return Err(Error::Internal(format!("d_0 = {d0} exceeds 4 eps n")));
        }
        let a_union = a_union as usize;
        let m = n - pn;
        if !(a_f < a_union && a_union < m) {
            return param(format!("need a_F = {a_f} < a_union = {a_union} < n - pn = {m}"));
        }
        let union_arity = union_arity(m, a_f, a_union)?;

        let mut intervals = Vec::with_capacity(l + 1);
        intervals.push(CoordSet::range(0..d0));
        for j in 0..l {
            intervals.push(CoordSet::range(d0 + j * d1..d0 + (j + 1) * d1));
        }
        let i_star = CoordSet::range(0..pn);
        let ground = CoordSet::range(pn..n);

        let alpha = p + p_l / frac(2 * li, 1);
        let required_distance = (ceil_mul(&alpha, n) as usize).max(n - a_union + 1);
        let a_union_strict = frac(a_union as i128, 1) > (one - alpha) * nf;

        let (pf, rf) = (to_f64(&p), to_f64(rate));
        let lf = l as f64;
        let terms = [
            1.0 - ((1.0 - rf) / 4.0).powi(l as i32) / (4.0 * lf),
            1.0 - pf.powi(l as i32) / (4.0 * lf * (1.0 - pf)),
            a_union as f64 / m as f64,
            a_f as f64 / m as f64,
            (lf + 1.0) * rf / (1.0 + (lf + 1.0) * rf),
        ];
        let holds = terms.windows(2).all(|w| w[0] + CHAIN_TOLERANCE >= w[1]);

        Ok(AttackParams {
            n,
            list_size: l,
            rate: *rate,
            eps: *eps,
            p,
            pn,
            k,
            a_f,
            a_union,
            d0,
            d1,
            intervals,
            i_star,
            ground,
            union_arity,
            required_distance,
            a_union_strict,
            interval_chain: IntervalChain { terms, holds },
        })
    }

    pub fn ground_size(&self) -> usize {
        self.n - self.pn
    }

    /// Largest distance from the center to `c_j`, `j >= 1`: `n - d_0 - d_1 - a_F`.
    pub fn partner_bound(&self) -> usize {
        self.n - self.d0 - self.d1 - self.a_f
    }
}

/// Parameters of the average-radius list-of-2 attack with a distance assumption.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warmup2Params {
    pub n: usize,
    #[serde(with = "fraction_serde")]
    pub rate: Fraction,
    #[serde(with = "fraction_serde")]
    pub eps: Fraction,
    /// `|I_0| = 4 eps n`.
    pub i0: usize,
    /// `(R - eps) n`.
    pub alpha_n: usize,
    /// `(R + eps) n`.
    pub beta_n: usize,
    /// `(1 - R - eps) n`: the minimum distance must exceed this.
    pub distance_floor: usize,
    /// `2 (1 - R - eps) n`, the total distance budget.
    pub total: usize,
}

impl Warmup2Params {
    /// Rounds `R` down and `eps + 3/n` up to multiples of `3/n`.
    pub fn derive(n: usize, rate: &Fraction, eps: &Fraction) -> Result<Self> {
        if n == 0 {
            return input("need n >= 1");
        }
        let step = frac(3, n as i128);
        Self::from_multiples(n, &floor_to_multiple(rate, &step), &ceil_to_multiple(&(eps + step), &step))
    }

    /// Parameters for `R` and `eps` already multiples of `3/n`.
    pub fn from_multiples(n: usize, rate: &Fraction, eps: &Fraction) -> Result<Self> {
        let step = frac(3, n as i128);
        if !is_multiple_of(rate, &step) || !is_multiple_of(eps, &step) {
            return Err(Error::Parameterization(format!("R = {rate} and eps = {eps} must be multiples of 3/n")));
        }
        if *eps <= frac(0, 1) || *rate <= *eps || *rate >= frac(1, 1) {
            return Err(Error::Parameterization(format!("need 0 < eps < R < 1, got R = {rate}, eps = {eps}")));
        }
        let nf = frac(n as i128, 1);
        let at = |x: Fraction| (x * nf).to_integer();
        let i0 = at(frac(4, 1) * eps);
        let alpha_n = at(rate - eps);
        let beta_n = at(rate + eps);
        let distance_floor = at(frac(1, 1) - rate - eps);
        if i0 + beta_n > n as i128 {
            return Err(Error::Parameterization(format!("|I_0| + (R + eps) n = {} exceeds n = {n}", i0 + beta_n)));
        }
        Ok(Warmup2Params {
            n,
            rate: *rate,
            eps: *eps,
            i0: i0 as usize,
            alpha_n: alpha_n as usize,
            beta_n: beta_n as usize,
            distance_floor: distance_floor as usize,
            total: 2 * distance_floor as usize,
        })
    }
}
