//! Generalized Artin-Schreier curves `y^q - y = f(x)` over `F_Q`, their
//! point counts over `F_{Q^n}`, and L-polynomial recovery.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElement, TraceKernel};
use crate::newton::LPolynomial;

/// `y^{p^u} - y = Σ a_i x^i` over `F_{p^s}`.
#[derive(Clone)]
pub struct CurveSpec {
    p: u64,
    u: u32,
    s: u32,
    field: Arc<FieldCtx>,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurveSpec({})", self.render())
    }
}

impl PartialEq for CurveSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.u == other.u && self.s == other.s && self.coeffs == other.coeffs
    }
}

impl CurveSpec {
    /// Builds a curve from per-coefficient `F_p` digit vectors (constant
    /// digit first), `a_0` first. Trailing zero coefficients are dropped.
    pub fn new(p: u64, u: u32, s: u32, coeffs: &[Vec<u32>]) -> Result<CurveSpec> {
        if u == 0 || s == 0 {
            return Err(Error::InvalidCurve("u and s must be positive".into()));
        }
        let field = FieldCtx::galois(p, s as usize)?;
        let mut elems = coeffs
            .iter()
            .map(|c| field.from_flat_digits(c))
            .collect::<Result<Vec<_>>>()?;
        while elems.last().is_some_and(|e| e.is_zero()) {
            elems.pop();
        }
        Self::from_elements(p, u, s, field, elems)
    }

    /// Curve with `F_p` coefficients given as integers in `[0, p)`.
    pub fn over_prime_subfield(p: u64, u: u32, s: u32, coeffs: &[u32]) -> Result<CurveSpec> {
        let v: Vec<Vec<u32>> = coeffs.iter().map(|&c| vec![c]).collect();
        Self::new(p, u, s, &v)
    }

    fn from_elements(
        p: u64,
        u: u32,
        s: u32,
        field: Arc<FieldCtx>,
        coeffs: Vec<FieldElement>,
    ) -> Result<CurveSpec> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidCurve("f must have degree at least 1".into()));
        }
        let d = coeffs.len() as u64 - 1;
        if d.is_multiple_of(p) {
            return Err(Error::InvalidCurve(format!(
                "degree {d} is divisible by the characteristic {p}"
            )));
        }
        if arith::checked_pow(p, u).is_none() {
            return Err(Error::InvalidCurve(format!("q = {p}^{u} is too large")));
        }
        Ok(CurveSpec {
            p,
            u,
            s,
            field,
            coeffs,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn u(&self) -> u32 {
        self.u
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// `q = p^u`.
    pub fn q(&self) -> u64 {
        self.p.pow(self.u)
    }

    /// `Q = p^s`.
    pub fn field_size(&self) -> u64 {
        self.field.size()
    }

    pub fn degree(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Flat `F_p` digits of each coefficient, `a_0` first.
    pub fn coeff_digits(&self) -> Vec<Vec<u32>> {
        self.coeffs
            .iter()
            .map(|c| self.field.flat_digits(c))
            .collect()
    }

    /// `(q - 1)(d - 1)/2`.
    pub fn genus(&self) -> u64 {
        (self.q() - 1) * (self.degree() - 1) / 2
    }

    /// Indices with a nonzero coefficient.
    pub fn support(&self) -> BTreeSet<u64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i as u64)
            .collect()
    }

    /// Support together with `σ`, the largest digit sum over it.
    pub fn support_sigma(&self) -> (BTreeSet<u64>, u64) {
        let support = self.support();
        let sigma = support
            .iter()
            .map(|&l| arith::digit_sum(l, self.p))
            .max()
            .unwrap_or(0);
        (support, sigma)
    }

    /// `gcd(u, s·n)`: the kernel of `y ↦ y^q - y` on `F_{Q^n}` is
    /// `F_{p^{g_n}}`.
    pub fn kernel_degree(&self, n: usize) -> usize {
        arith::gcd(self.u as u64, self.s as u64 * n as u64) as usize
    }

    /// `F_{Q^n}` as a degree-`n` extension of `F_Q`.
    pub fn extension(&self, n: usize) -> Result<Arc<FieldCtx>> {
        if n == 1 {
            Ok(Arc::clone(&self.field))
        } else {
            FieldCtx::extend(&self.field, n)
        }
    }

    /// Coefficient encodings of `a_i` embedded in `ext` (constant polynomials).
    fn embedded_coeffs(&self, ext: &FieldCtx) -> Vec<Vec<u32>> {
        if std::ptr::eq(ext, &*self.field) {
            return self.coeffs.iter().map(|c| c.coeffs().to_vec()).collect();
        }
        self.coeffs
            .iter()
            .map(|c| {
                let mut v = vec![0u32; ext.ext_degree()];
                v[0] = self.field.encoding(c) as u32;
                v
            })
            .collect()
    }

    /// Canonical text form, `p=2 u=1 s=1 f=x^5+x^3`.
    pub fn render(&self) -> String {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let digits = self.field.flat_digits(c);
            let scalar = digits[1..].iter().all(|&x| x == 0);
            let coef = if scalar {
                digits[0].to_string()
            } else {
                format!("({})", self.field.render_flat(c))
            };
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            terms.push(match (i, coef.as_str()) {
                (0, _) => coef,
                (_, "1") => mono,
                _ => format!("{coef}*{mono}"),
            });
        }
        format!(
            "p={} u={} s={} f={}",
            self.p,
            self.u,
            self.s,
            terms.join("+")
        )
    }

    /// Parses `p=<int> u=<int> s=<int> f=<terms>`.
    pub fn parse(text: &str) -> Result<CurveSpec> {
        crate::curve_parse::parse(text)
    }
}

/// Exact counts `#X(F_{Q^n})` and signed traces `S_n = #X - Q^n - 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointCountSeries {
    pub values: Vec<BigInt>,
    pub signed_s: Vec<BigInt>,
}

impl PointCountSeries {
    fn push(&mut self, spec: &CurveSpec, count: BigInt) {
        let n = self.values.len() + 1;
        let qn = BigInt::from(spec.field_size()).pow(n as u32);
        self.signed_s.push(&count - qn - 1);
        self.values.push(count);
    }
}

fn budget_check(what: impl Into<String>, required: u128, budget: u64) -> Result<()> {
    if required > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: what.into(),
            required,
            budget,
        });
    }
    Ok(())
}

fn pow_u128(base: u64, e: usize) -> u128 {
    (base as u128).checked_pow(e as u32).unwrap_or(u128::MAX)
}

/// `f(x)` evaluated at the element with encoding `x`, by Horner's rule.
fn eval_f(ext: &FieldCtx, coeffs: &[Vec<u32>], x: &[u32]) -> Vec<u32> {
    let mut acc = coeffs[coeffs.len() - 1].clone();
    for c in coeffs[..coeffs.len() - 1].iter().rev() {
        acc = ext.mul_raw(&acc, x);
        ext.add_assign_raw(&mut acc, c);
    }
    acc
}

/// Pair-enumeration oracle: `1 + #{(x, y) : y^q - y = f(x)}`.
pub fn count_points_naive(spec: &CurveSpec, n: usize, budget: u64) -> Result<BigInt> {
    let qn = spec.field_size().checked_pow(n as u32);
    let required = pow_u128(spec.field_size(), 2 * n);
    budget_check(
        format!("pair enumeration over F_{}^{}", spec.p, spec.s as usize * n),
        required,
        budget,
    )?;
    let qn = qn.expect("within budget");
    let ext = spec.extension(n)?;
    let coeffs = spec.embedded_coeffs(&ext);
    let q = spec.q();
    let fx: Vec<u64> = (0..qn)
        .map(|e| ext.encode(&eval_f(&ext, &coeffs, &ext.decode(e))))
        .collect();
    let lhs: Vec<u64> = (0..qn)
        .map(|e| {
            let y = ext.decode(e);
            let yq = ext.pow_raw_u64(&y, q);
            ext.encode(&ext.sub_raw(&yq, &y))
        })
        .collect();
    let affine: u64 = fx
        .par_iter()
        .map(|&v| lhs.iter().filter(|&&w| w == v).count() as u64)
        .sum();
    Ok(BigInt::from(affine) + 1)
}

/// Fibre count: `1 + p^{g_n}·#{x : Tr_{F_{Q^n}/F_{p^{g_n}}}(f(x)) = 0}`.
pub fn count_points_trace(spec: &CurveSpec, n: usize, budget: u64) -> Result<BigInt> {
    let required = pow_u128(spec.field_size(), n);
    budget_check(
        format!("enumerating F_{}^{}", spec.p, spec.s as usize * n),
        required,
        budget,
    )?;
    let qn = required as u64;
    let ext = spec.extension(n)?;
    let g = spec.kernel_degree(n);
    let kernel = TraceKernel::new(&ext, g)?;
    let coeffs = spec.embedded_coeffs(&ext);
    const CHUNK: u64 = 1 << 12;
    let chunks = qn.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut scratch = Vec::new();
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(qn);
            (lo..hi)
                .filter(|&e| {
                    let fx = eval_f(&ext, &coeffs, &ext.decode(e));
                    kernel.vanishes(&fx, &mut scratch)
                })
                .count() as u64
        })
        .sum();
    let fibre = BigInt::from(spec.p).pow(g as u32);
    Ok(fibre * hits + 1)
}

/// Counts over `F_{Q^1}, ..., F_{Q^{n_max}}` with the fibre counter.
pub fn point_counts(spec: &CurveSpec, n_max: usize, budget: u64) -> Result<PointCountSeries> {
    let mut series = PointCountSeries::default();
    for n in 1..=n_max {
        series.push(spec, count_points_trace(spec, n, budget)?);
    }
    Ok(series)
}

/// `S_n` implied by an L-polynomial, for `n = 1..=n_max`, by Newton's
/// identities `S_n = n c_n - Σ_{j<n} S_j c_{n-j}` (with `c_n = 0` past `2g`).
pub fn traces_from_lpoly(l: &LPolynomial, n_max: usize) -> Vec<BigInt> {
    let c = |k: usize| l.coeffs.get(k).cloned().unwrap_or_default();
    let mut s: Vec<BigInt> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut v = c(n) * BigInt::from(n);
        for j in 1..n {
            v -= &s[j - 1] * c(n - j);
        }
        s.push(v);
    }
    s
}

/// Recovers `L` from `S_1..S_g` by Newton's identities and the functional
/// equation. With `verify`, also counts `S_{g+1}..S_{2g}` and checks them
/// against the completed polynomial.
pub fn lpolynomial(spec: &CurveSpec, verify: bool, budget: u64) -> Result<LPolynomial> {
    Ok(lpolynomial_with_counts(spec, verify, budget)?.0)
}

/// [`lpolynomial`] that also returns the point counts it used.
pub fn lpolynomial_with_counts(
    spec: &CurveSpec,
    verify: bool,
    budget: u64,
) -> Result<(LPolynomial, PointCountSeries)> {
    let g = spec.genus() as usize;
    let n_max = if verify { 2 * g } else { g };
    budget_check(
        format!("point counts up to F_{}^{}", spec.p, spec.s as usize * n_max),
        pow_u128(spec.field_size(), n_max),
        budget,
    )?;
    let counts = point_counts(spec, n_max, budget)?;
    let q_big = BigInt::from(spec.field_size());
    for (k, sn) in counts.signed_s.iter().enumerate() {
        let n = k + 1;
        let root = BigInt::from(BigUint::sqrt(&q_big.pow(n as u32).to_biguint().unwrap()));
        let bound = BigInt::from(2 * g as u64) * (root + 1);
        if sn.abs() > bound {
            return Err(Error::CountingInconsistency {
                n,
                detail: format!("|S_{n}| = {} exceeds the Weil bound {bound}", sn.abs()),
            });
        }
    }
    let mut c: Vec<BigInt> = vec![BigInt::from(1)];
    for n in 1..=g {
        let mut acc = BigInt::zero();
        for j in 1..=n {
            acc += &counts.signed_s[j - 1] * &c[n - j];
        }
        let (quo, rem) = acc.div_rem(&BigInt::from(n));
        if !rem.is_zero() {
            return Err(Error::CountingInconsistency {
                n,
                detail: format!("{acc} is not divisible by {n}"),
            });
        }
        c.push(quo);
    }
    for k in (g + 1)..=(2 * g) {
        let i = 2 * g - k;
        c.push(q_big.pow((g - i) as u32) * &c[i]);
    }
    let l = LPolynomial::new(c, spec.p, spec.s)?;
    if verify {
        let predicted = traces_from_lpoly(&l, 2 * g);
        for n in (g + 1)..=(2 * g) {
            if predicted[n - 1] != counts.signed_s[n - 1] {
                return Err(Error::CountingInconsistency {
                    n,
                    detail: format!(
                        "counted S_{n} = {} but the completed polynomial gives {}",
                        counts.signed_s[n - 1],
                        predicted[n - 1]
                    ),
                });
            }
        }
    }
    Ok((l, counts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DEFAULT_BUDGET;

    fn curve(p: u64, u: u32, s: u32, terms: &[(usize, u32)]) -> CurveSpec {
        let d = terms.iter().map(|t| t.0).max().unwrap();
        let mut c = vec![0u32; d + 1];
        for &(i, a) in terms {
            c[i] = a;
        }
        CurveSpec::over_prime_subfield(p, u, s, &c).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn genus_values() {
        assert_eq!(curve(2, 1, 1, &[(3, 1)]).genus(), 1);
        assert_eq!(curve(2, 2, 2, &[(3, 1)]).genus(), 3);
        assert_eq!(curve(3, 1, 1, &[(1, 1)]).genus(), 0);
    }

    #[test]
    fn sigma_values() {
        let (sup, sigma) = curve(2, 1, 1, &[(5, 1), (3, 1)]).support_sigma();
        assert_eq!(sup.into_iter().collect::<Vec<_>>(), vec![3, 5]);
        assert_eq!(sigma, 2);
        assert_eq!(curve(3, 1, 1, &[(104, 1)]).support_sigma().1, 6);
        assert_eq!(curve(3, 1, 1, &[(1, 1)]).support_sigma().1, 1);
    }

    #[test]
    fn validation() {
        assert!(CurveSpec::over_prime_subfield(2, 1, 1, &[0, 0, 1]).is_err());
        assert!(CurveSpec::over_prime_subfield(2, 1, 1, &[1]).is_err());
        assert!(CurveSpec::over_prime_subfield(3, 1, 1, &[0, 0, 0, 1]).is_err());
        assert!(CurveSpec::over_prime_subfield(4, 1, 1, &[0, 1]).is_err());
        assert!(CurveSpec::over_prime_subfield(2, 1, 1, &[0, 2]).is_err());
    }

    #[test]
    fn worked_counts() {
        let c = curve(2, 1, 1, &[(3, 1)]);
        assert_eq!(count_points_naive(&c, 1, DEFAULT_BUDGET).unwrap(), BigInt::from(3));
        assert_eq!(count_points_naive(&c, 2, DEFAULT_BUDGET).unwrap(), BigInt::from(9));
        assert_eq!(count_points_trace(&c, 2, DEFAULT_BUDGET).unwrap(), BigInt::from(9));
        let l = lpolynomial(&c, true, DEFAULT_BUDGET).unwrap();
        assert_eq!(l.coeffs, ints(&[1, 0, 2]));
    }

    #[test]
    fn genus_zero_is_trivial() {
        let c = curve(5, 1, 2, &[(1, 1), (0, 3)]);
        for n in 1..=2 {
            let count = count_points_trace(&c, n, DEFAULT_BUDGET).unwrap();
            assert_eq!(count, BigInt::from(25u64.pow(n as u32) + 1));
        }
        assert_eq!(lpolynomial(&c, true, DEFAULT_BUDGET).unwrap().coeffs, ints(&[1]));
    }

    #[test]
    fn septic_functional_equation() {
        let c = curve(2, 1, 1, &[(7, 1)]);
        let l = lpolynomial(&c, true, DEFAULT_BUDGET).unwrap();
        assert_eq!(l.coeffs.len(), 7);
        assert_eq!(l.coeffs[6], BigInt::from(8));
    }

    #[test]
    fn u2_fibres() {
        let c = curve(2, 2, 2, &[(3, 1)]);
        assert_eq!(c.kernel_degree(1), 2);
        assert_eq!(
            count_points_trace(&c, 1, DEFAULT_BUDGET).unwrap(),
            count_points_naive(&c, 1, DEFAULT_BUDGET).unwrap()
        );
    }

    #[test]
    fn budgets_refuse() {
        let c = curve(2, 1, 1, &[(3, 1)]);
        assert!(matches!(
            count_points_naive(&c, 3, 63),
            Err(Error::BudgetExceeded { required: 64, .. })
        ));
        assert!(count_points_trace(&c, 7, 100).is_err());
    }

    #[test]
    fn traces_roundtrip() {
        let l = LPolynomial::new(ints(&[1, 0, 2]), 2, 1).unwrap();
        assert_eq!(traces_from_lpoly(&l, 2), ints(&[0, 4]));
    }
}
