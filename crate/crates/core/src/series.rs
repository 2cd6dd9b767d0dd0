//! Truncated integer power series for `y^q - y = z` and the coefficients
//! `D_{k}(a)`, `E_{k}(i, N)` and `C_r(i, N)` built from it.
//!
//! Everything is exact over the integers, optionally reduced modulo a
//! fixed `p^K`. Curve coefficients enter through integer lifts in
//! `[0, p)`, so only prime fields (`s = 1`) are supported.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{self, digit_sum, digit_sum_signed};
use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::newton::Rational;
use crate::tiling::{self, TilingWeight};

/// `Σ_{k ≤ order} c_k z^k`, exact modulo `z^{order+1}` (and modulo
/// `modulus` when set).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    pub coeffs: Vec<BigInt>,
    pub order: usize,
    pub modulus: Option<BigInt>,
}

impl TruncSeries {
    pub fn new(mut coeffs: Vec<BigInt>, order: usize, modulus: Option<BigInt>) -> TruncSeries {
        coeffs.resize(order + 1, BigInt::zero());
        let mut s = TruncSeries {
            coeffs,
            order,
            modulus,
        };
        s.reduce();
        s
    }

    pub fn zero(order: usize, modulus: Option<BigInt>) -> TruncSeries {
        Self::new(Vec::new(), order, modulus)
    }

    pub fn one(order: usize, modulus: Option<BigInt>) -> TruncSeries {
        Self::new(vec![BigInt::one()], order, modulus)
    }

    /// The series `z`.
    pub fn var(order: usize, modulus: Option<BigInt>) -> TruncSeries {
        Self::new(vec![BigInt::zero(), BigInt::one()], order, modulus)
    }

    fn reduce(&mut self) {
        if let Some(m) = &self.modulus {
            for c in self.coeffs.iter_mut() {
                *c = c.mod_floor(m);
            }
        }
    }

    fn like(&self, coeffs: Vec<BigInt>) -> TruncSeries {
        Self::new(coeffs, self.order, self.modulus.clone())
    }

    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        self.like(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        self.like(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> TruncSeries {
        self.like(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let n = self.order;
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        self.like(out)
    }

    pub fn pow(&self, mut e: u64) -> TruncSeries {
        let mut acc = TruncSeries::one(self.order, self.modulus.clone());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `self(inner)`; `inner` must have no constant term.
    pub fn compose(&self, inner: &TruncSeries) -> Result<TruncSeries> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Unsupported(
                "composition needs an inner series without constant term".into(),
            ));
        }
        let mut out = TruncSeries::zero(inner.order, inner.modulus.clone());
        let mut power = TruncSeries::one(inner.order, inner.modulus.clone());
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > inner.order {
                break;
            }
            if !c.is_zero() {
                out = out.add(&power.scale(c));
            }
            power = power.mul(inner);
        }
        Ok(out)
    }
}

fn check_q(q: u64) -> Result<(u64, u32)> {
    arith::prime_power(q).ok_or_else(|| Error::Unsupported(format!("q = {q} is not a prime power")))
}

/// The unique `y` with `y(0) = 0` and `y^q - y ≡ z mod z^{R+1}`, by
/// iterating `y ← y^q - z` from `y = -z` until it stops changing.
pub fn solve_y(q: u64, order: usize, modulus: Option<BigInt>) -> Result<TruncSeries> {
    check_q(q)?;
    if order == 0 {
        return Err(Error::Unsupported("truncation order must be positive".into()));
    }
    let z = TruncSeries::var(order, modulus);
    let mut y = z.scale(&BigInt::from(-1));
    loop {
        let next = y.pow(q).sub(&z);
        if next == y {
            return Ok(y);
        }
        y = next;
    }
}

/// `y^q - y - z` for a candidate `y`.
pub fn residual(y: &TruncSeries, q: u64) -> TruncSeries {
    y.pow(q)
        .sub(y)
        .sub(&TruncSeries::var(y.order, y.modulus.clone()))
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `D_{k}(a)`, the `z^k` coefficient of `y^a`: zero unless
/// `k = a + m(q-1)` with `m ≥ 0`, and then
/// `(-1)^k · a·(k+m-1)! / (k!·m!)`. `D_k(0)` is `1` at `k = 0`.
pub fn d_coeff(a: u64, k1: u64, q: u64) -> BigInt {
    if a == 0 {
        return if k1 == 0 { BigInt::one() } else { BigInt::zero() };
    }
    if k1 < a || !(k1 - a).is_multiple_of(q - 1) {
        return BigInt::zero();
    }
    let m = (k1 - a) / (q - 1);
    let num = BigInt::from(a) * factorial(k1 + m - 1);
    let den = factorial(k1) * factorial(m);
    let (v, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    if k1 % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Valuation of `D_{k}(a)` against `(s_p(k) - s_p(i-1) - 1)/(p-1)` with
/// `a = i + l(q-1)`, `1 ≤ i ≤ q-1`: equality for `l = 0`, and the bound
/// lowered by `(l-1)u` for `l ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdDReport {
    pub a: u64,
    pub k1: u64,
    pub q: u64,
    pub i: u64,
    pub l: u64,
    pub observed: u32,
    pub predicted: Rational,
    /// The relation exactly as stated.
    pub holds: bool,
    /// The relation with `ord_p(a)` added to the prediction, as the
    /// factorial identity gives.
    pub holds_with_ord_a: bool,
}

pub fn ord_d_check(a: u64, k1: u64, q: u64) -> Result<OrdDReport> {
    let (p, u) = check_q(q)?;
    let d = d_coeff(a, k1, q);
    if a == 0 || d.is_zero() {
        return Err(Error::Unsupported(format!(
            "D_{k1}({a}) vanishes for q = {q}"
        )));
    }
    let observed = arith::ord_p(&d, p).expect("nonzero");
    let l = (a - 1) / (q - 1);
    let i = a - l * (q - 1);
    let num = digit_sum(k1, p) as i64 - digit_sum_signed(i as i64 - 1, p) - 1;
    let base = Rational::new(num, p as i64 - 1);
    let obs = Rational::from_integer(observed as i64);
    let ord_a = Rational::from_integer(arith::ord_p_u64(a, p).unwrap() as i64);
    let (predicted, holds, holds_with_ord_a) = if l == 0 {
        (base, obs == base, obs == base + ord_a)
    } else {
        let bound = base - Rational::from_integer(((l - 1) * u as u64) as i64);
        (bound, obs >= bound, obs >= bound)
    };
    Ok(OrdDReport {
        a,
        k1,
        q,
        i,
        l,
        observed,
        predicted,
        holds,
        holds_with_ord_a,
    })
}

/// `y^i (q y^{q-1} - 1)^{p^N - 1}` to order `R`.
pub fn e_coeffs(i: u64, n: u32, q: u64, order: usize, modulus: Option<BigInt>) -> Result<TruncSeries> {
    let (p, _) = check_q(q)?;
    if i >= q || n == 0 {
        return Err(Error::Unsupported(format!(
            "need 0 ≤ i ≤ q-1 and N ≥ 1, got i = {i}, N = {n}"
        )));
    }
    let exp = arith::checked_pow(p, n)
        .filter(|&e| e <= 1 << 20)
        .ok_or_else(|| Error::Unsupported(format!("p^N = {p}^{n} is too large")))?
        - 1;
    let y = solve_y(q, order, modulus.clone())?;
    let one = TruncSeries::one(order, modulus);
    let inner = y.pow(q - 1).scale(&BigInt::from(q)).sub(&one);
    Ok(y.pow(i).mul(&inner.pow(exp)))
}

/// `E_{k}(i, N) = Σ_l (-1)^{p^N-1-l} C(p^N-1, l) q^l D_{k}(i + l(q-1))`.
pub fn e_closed_form(k1: u64, i: u64, n: u32, q: u64) -> Result<BigInt> {
    let (p, _) = check_q(q)?;
    let m = p.pow(n) - 1;
    let mut total = BigInt::zero();
    let mut binom = BigInt::one();
    let qb = BigInt::from(q);
    let mut ql = BigInt::one();
    for l in 0..=m {
        let a = i + l * (q - 1);
        if a > k1 {
            break;
        }
        let term = &binom * &ql * d_coeff(a, k1, q);
        if (m - l) % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
        binom = binom * (m - l) / (l + 1);
        ql *= &qb;
    }
    Ok(total)
}

/// Integer lifts `ã_0..ã_d` in `[0, p)` of a prime-field curve.
pub fn lifts_of(spec: &CurveSpec) -> Result<Vec<u64>> {
    if spec.s() != 1 {
        return Err(Error::Unsupported(format!(
            "series coefficients need s = 1 (got s = {}); Witt-vector lifts are not implemented",
            spec.s()
        )));
    }
    Ok(spec.coeff_digits().iter().map(|c| c[0] as u64).collect())
}

/// `C_r(i, N)` for `r ≤ R`: the `x^r` coefficients of
/// `Σ_k E_k(i, N) f̃(x)^k`, where `f̃` drops the constant term.
pub fn c_coeffs(spec: &CurveSpec, i: u64, n: u32, order: usize) -> Result<Vec<BigInt>> {
    let lifts = lifts_of(spec)?;
    c_coeffs_from_lifts(&lifts, spec.q(), i, n, order, None)
}

pub fn c_coeffs_from_lifts(
    lifts: &[u64],
    q: u64,
    i: u64,
    n: u32,
    order: usize,
    modulus: Option<BigInt>,
) -> Result<Vec<BigInt>> {
    let e = e_coeffs(i, n, q, order, modulus.clone())?;
    let mut f: Vec<BigInt> = lifts.iter().map(|&a| BigInt::from(a)).collect();
    if let Some(c0) = f.first_mut() {
        *c0 = BigInt::zero();
    }
    let inner = TruncSeries::new(f, order, modulus);
    Ok(e.compose(&inner)?.coeffs)
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, t| acc * (n - t) / (t + 1))
}

/// `C_r(i, N) = Σ_{k ∈ K_r} E_{k_1}(i, N) Π_l C(k_l, k_{l+1}) ã_l^{k_l - k_{l+1}}`
/// with `d = deg f` parts and `0^0 = 1`.
pub fn c_combinatorial(lifts: &[u64], q: u64, i: u64, n: u32, r: u64) -> Result<BigInt> {
    let d = lifts.len().saturating_sub(1);
    if d == 0 {
        return Ok(if r == 0 { e_closed_form(0, i, n, q)? } else { BigInt::zero() });
    }
    let mut e_cache: HashMap<u64, BigInt> = HashMap::new();
    let mut total = BigInt::zero();
    for k in tiling::enumerate_partitions(r, d)? {
        let k1 = k.k[0];
        if let std::collections::hash_map::Entry::Vacant(e) = e_cache.entry(k1) {
            e.insert(e_closed_form(k1, i, n, q)?);
        }
        let e = &e_cache[&k1];
        if e.is_zero() {
            continue;
        }
        let mut term = e.clone();
        for (l, m) in k.jumps().into_iter().enumerate() {
            let next = k.k.get(l + 1).copied().unwrap_or(0);
            term *= binomial(k.k[l], next);
            term *= num_traits::pow(BigInt::from(lifts[l + 1]), m as usize);
        }
        total += term;
    }
    Ok(total)
}

/// First `r` where `C_r(i, N + a) ≢ C_r(i, N) mod p^{N+1}`, if any.
pub fn rel_check(lifts: &[u64], q: u64, i: u64, n: u32, a: u32, order: usize) -> Result<Option<usize>> {
    let (p, _) = check_q(q)?;
    let m = BigInt::from(p).pow(n + 1);
    let lo = c_coeffs_from_lifts(lifts, q, i, n, order, None)?;
    let hi = c_coeffs_from_lifts(lifts, q, i, n + a, order, None)?;
    Ok((0..=order).find(|&r| (&hi[r] - &lo[r]).mod_floor(&m) != BigInt::zero()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmodReport {
    pub d: u64,
    pub r: u64,
    pub modulus: BigInt,
    pub observed: BigInt,
    pub expected: BigInt,
}

impl CmodReport {
    pub fn holds(&self) -> bool {
        self.observed == self.expected
    }
}

/// `C_{j(p^{bh}-1)}(i, N) ≡ p^b ã_{j(p^h-1)}^{(p^{bh}-1)/(p^h-1)} mod p^{b+1}`
/// for `f̃ = Σ ã_l x^l` of degree `d = j(p^h - 1)`. `lower` supplies
/// `ã_1..ã_{d-1}` (missing entries are 0) and `lead` is `ã_d`.
#[allow(clippy::too_many_arguments)]
pub fn cmod_check(
    p: u64,
    u: u32,
    h: u32,
    j: u64,
    i: u64,
    n: u32,
    b: u32,
    lead: u64,
    lower: &[u64],
) -> Result<CmodReport> {
    arith::require_prime(p)?;
    if !(1..p).contains(&j) || h == 0 || b == 0 {
        return Err(Error::Unsupported("need 1 ≤ j ≤ p-1, h ≥ 1, b ≥ 1".into()));
    }
    let q = p.pow(u);
    let ph = p.pow(h);
    let d = j * (ph - 1);
    let pbh = p.pow(b * h);
    let r = j * (pbh - 1);
    if r > 2000 {
        return Err(Error::Guardrail(format!("r = {r} exceeds the series budget")));
    }
    let mut lifts = vec![0u64; d as usize + 1];
    for (l, &a) in lower.iter().enumerate().take(d as usize - 1) {
        lifts[l + 1] = a % p;
    }
    lifts[d as usize] = lead % p;
    let modulus = BigInt::from(p).pow(b + 1);
    let c = c_coeffs_from_lifts(&lifts, q, i, n, r as usize, Some(modulus.clone()))?;
    let observed = c[r as usize].mod_floor(&modulus);
    let e = (pbh - 1) / (ph - 1);
    let expected = (BigInt::from(p).pow(b) * BigInt::from(lead % p).modpow(&BigInt::from(e), &modulus))
        .mod_floor(&modulus);
    Ok(CmodReport {
        d,
        r,
        modulus,
        observed,
        expected,
    })
}

/// `ord_p(C_r(i, N)) ≥ (s̃_p(r, supp) - s_p(i-1) - 1)/(p-1)` for one `r`;
/// `None` when `s̃` is infinite or `C_r = 0`.
pub fn c_valuation_margin(
    c_r: &BigInt,
    r: u64,
    support: &BTreeSet<u64>,
    p: u64,
    i: u64,
) -> Result<Option<Rational>> {
    let TilingWeight::Finite(w) = tiling::tilde_s(r, support, p)? else {
        return Ok(None);
    };
    let Some(v) = arith::ord_p(c_r, p) else {
        return Ok(None);
    };
    let bound = Rational::new(
        w as i64 - digit_sum_signed(i as i64 - 1, p) - 1,
        p as i64 - 1,
    );
    Ok(Some(Rational::from_integer(v as i64) - bound))
}

/// `true` when every coefficient is zero.
pub fn is_zero(s: &TruncSeries) -> bool {
    s.coeffs.iter().all(|c| c.is_zero())
}
