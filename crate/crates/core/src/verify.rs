//! The full verdict pipeline for one curve, and a seeded random sweep.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{self, Family};
use crate::curve::{self, CurveSpec};
use crate::error::Result;
use crate::newton::{self, LPolynomial, NewtonPolygon, Rational, SnDivisibility};

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub curve: String,
    pub genus: u64,
    pub lpoly: LPolynomial,
    pub polygon: NewtonPolygon,
    /// `None` for genus 0.
    pub first_slope: Option<Rational>,
    pub supersingular: bool,
    pub sigma: u64,
    pub tau: u64,
    /// `NP_1 ≥ 1/σ`.
    pub sigma_bound: bool,
    /// `NP_1 ≥ 1/τ`; vacuous when `τ = 0`.
    pub tau_bound: bool,
    pub p_rank_zero: bool,
    pub coeff_divisibility: bool,
    pub sn: Vec<SnDivisibility>,
    pub improved_hw: bool,
    pub family: Family,
    /// Agreement of the computed polygon with the family prediction.
    pub family_consistent: Option<bool>,
}

impl CheckReport {
    /// Names of the failed checks.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.sigma_bound {
            v.push("first_slope >= 1/sigma");
        }
        if !self.tau_bound {
            v.push("first_slope >= 1/tau");
        }
        if !self.p_rank_zero {
            v.push("p-rank 0");
        }
        if !self.coeff_divisibility {
            v.push("coefficient divisibility");
        }
        if self.sn.iter().any(|s| !s.holds) {
            v.push("S_n divisibility");
        }
        if !self.improved_hw {
            v.push("improved Hasse-Weil");
        }
        if self.family_consistent == Some(false) {
            v.push("family prediction");
        }
        if newton::is_supersingular(&self.lpoly)
            != self.polygon.slopes.iter().all(|s| *s == Rational::new(1, 2))
        {
            v.push("supersingularity equivalence");
        }
        v
    }
}

fn at_least(slope: Option<Rational>, den: u64) -> bool {
    match slope {
        None => true,
        Some(_) if den == 0 => true,
        Some(s) => s >= Rational::new(1, den as i64),
    }
}

pub fn check_curve(spec: &CurveSpec, verify: bool, budget: u64) -> Result<CheckReport> {
    let (l, counts) = curve::lpolynomial_with_counts(spec, verify, budget)?;
    let polygon = newton::newton_polygon(&l);
    let first_slope = polygon.first_slope().ok();
    let supersingular = newton::is_supersingular(&l);
    let (_, sigma) = spec.support_sigma();
    let d = spec.degree();
    let p = spec.p();
    let tau = bounds::tau(d, p);
    let g = spec.genus() as usize;
    let p_big = BigInt::from(p);
    let p_rank_zero = l.coeffs[1..].iter().all(|c| (c % &p_big).is_zero());
    let sn = newton::sn_divisibility(&counts.signed_s[..g], p, spec.s(), sigma);
    let mut improved_hw = true;
    if d >= 2 {
        for (k, s_n) in counts.signed_s.iter().enumerate() {
            let r = bounds::improved_hw(p, spec.s(), spec.u(), d, k as u32 + 1)?;
            let abs: BigUint = s_n.abs().to_biguint().expect("nonnegative");
            improved_hw &= abs <= r.hw_improved;
        }
    }
    let family = bounds::classify_family(spec);
    let family_consistent = match family {
        Family::Supersingular => Some(supersingular),
        Family::NonSupersingular { h, .. } => Some(
            !supersingular && first_slope == Some(Rational::new(1, h as i64 * (p as i64 - 1))),
        ),
        Family::Neither => None,
    };
    Ok(CheckReport {
        curve: spec.render(),
        genus: spec.genus(),
        sigma_bound: at_least(first_slope, sigma),
        tau_bound: at_least(first_slope, tau),
        coeff_divisibility: newton::check_coeff_divisibility(&l, sigma),
        lpoly: l,
        polygon,
        first_slope,
        supersingular,
        sigma,
        tau,
        p_rank_zero,
        sn,
        improved_hw,
        family,
        family_consistent,
    })
}

/// Cost cap for sweep members: `Q^g ≤ 2^16`.
pub const SWEEP_COST: u128 = 1 << 16;

fn sweep_cost(p: u64, u: u32, s: u32, d: u64) -> u128 {
    let g = (p.pow(u) - 1) * (d - 1) / 2;
    let mut acc: u128 = 1;
    for _ in 0..g {
        acc = acc.saturating_mul(p.pow(s) as u128);
    }
    acc
}

/// `count` random curves with `p ∈ {2,3,5}`, `u, s ∈ {1,2}`, `d ≤ 9`,
/// keeping only those with `Q^g ≤` [`SWEEP_COST`].
pub fn random_curves(seed: u64, count: usize) -> Vec<CurveSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let u = rng.gen_range(1..=2u32);
        let s = rng.gen_range(1..=2u32);
        let d = rng.gen_range(1..=9u64);
        if d % p == 0 || sweep_cost(p, u, s, d) > SWEEP_COST {
            continue;
        }
        let mut coeffs: Vec<Vec<u32>> = (0..=d)
            .map(|_| (0..s).map(|_| rng.gen_range(0..p as u32)).collect())
            .collect();
        if coeffs[d as usize].iter().all(|&c| c == 0) {
            coeffs[d as usize][0] = 1;
        }
        out.push(CurveSpec::new(p, u, s, &coeffs).expect("valid by construction"));
    }
    out
}

/// Runs [`check_curve`] on every curve in parallel, keeping input order.
pub fn sweep(curves: &[CurveSpec], verify: bool, budget: u64) -> Vec<Result<CheckReport>> {
    curves
        .par_iter()
        .map(|c| check_curve(c, verify, budget))
        .collect()
}
