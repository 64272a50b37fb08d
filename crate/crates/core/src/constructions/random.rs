use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::fraction::{frac, to_f64, Fraction};
use crate::model::{Code, Symbol, Word};
use crate::verifier::fraction_serde;

/// Largest code `random_code` will draw.
pub const DEFAULT_CODE_CAP: u128 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomCodeSpec {
    pub q: u32,
    pub n: usize,
    #[serde(with = "fraction_serde")]
    pub rate: Fraction,
    #[serde(with = "fraction_serde")]
    pub eps: Fraction,
    pub list_size: usize,
    pub seed: u64,
}

impl RandomCodeSpec {
    /// `floor(q^(R n))`.
    pub fn target_size(&self) -> Result<u128> {
        if self.q < 2 || self.n == 0 {
            return input("need q >= 2 and n >= 1");
        }
        if self.rate <= frac(0, 1) || self.rate > frac(1, 1) {
            return input(format!("rate R = {} outside (0, 1]", self.rate));
        }
        let exponent = self.rate * frac(self.n as i128, 1);
        floor_power(self.q as u128, &exponent)
    }

    /// `L/(L+1) (1 - R - eps)`, the radius the construction aims for.
    pub fn radius(&self) -> Result<Fraction> {
        if self.list_size == 0 {
            return input("list size L must be at least 1");
        }
        let l = self.list_size as i128;
        let p = frac(l, l + 1) * (frac(1, 1) - self.rate - self.eps);
        if p < frac(0, 1) {
            return input(format!("R + eps = {} exceeds 1", self.rate + self.eps));
        }
        Ok(p)
    }
}

/// Largest integer `N` with `N^b <= base^a` where `exponent = a / b`.
fn floor_power(base: u128, exponent: &Fraction) -> Result<u128> {
    let (a, b) = (*exponent.numer() as u32, *exponent.denom() as u32);
    if *exponent.denom() == 1 {
        return base.checked_pow(a).ok_or_else(|| Error::Resource(format!("{base}^{a} does not fit in 128 bits")));
    }
    let estimate = (to_f64(exponent) * (base as f64).ln()).exp();
    if !estimate.is_finite() || estimate >= 2f64.powi(100) {
        return Err(Error::Resource(format!("{base}^({exponent}) is too large")));
    }
    // Exact comparison when the powers fit; otherwise the float estimate stands.
    let fits = |x: u128| -> Option<bool> { Some(x.checked_pow(b)? <= base.checked_pow(a)?) };
    let mut n = estimate.floor() as u128;
    while n > 0 && fits(n) == Some(false) {
        n -= 1;
    }
    while fits(n + 1) == Some(true) {
        n += 1;
    }
    Ok(n.max(1))
}

/// Draws `floor(q^(R n))` distinct uniform words, resampling duplicates.
pub fn random_code(spec: &RandomCodeSpec, cap: u128) -> Result<Code> {
    let size = spec.target_size()?;
    if size > cap {
        return Err(Error::Resource(format!("target size N = {size} exceeds the cap {cap}")));
    }
    let space = (spec.q as f64).powi(spec.n as i32);
    if (size as f64) > space {
        return input(format!("N = {size} exceeds the {space} words of the space"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let size = size as usize;
    let mut seen: HashSet<Word> = HashSet::with_capacity(size);
    let mut words = Vec::with_capacity(size);
    while words.len() < size {
        let w: Vec<Symbol> = (0..spec.n).map(|_| rng.gen_range(0..spec.q)).collect();
        let w = Word::new(w);
        if seen.insert(w.clone()) {
            words.push(w);
        }
    }
    Code::new(spec.q, spec.n, words)
}
