//! Finite-field towers `F_p ⊂ F_Q ⊂ F_{Q^n}` in polynomial-basis form.
//!
//! A [`FieldCtx`] is a degree-`n` extension of its base context (a prime
//! field is the degree-1 extension of `F_p` by `t`). Every level uses the
//! canonical least monic irreducible modulus, so building the same tower
//! twice gives identical contexts.
//!
//! Elements store one canonical integer encoding per coefficient. The
//! encoding of a whole element is `Σ c_j B^j` with `B` the base order, which
//! coincides with reading its flattened `F_p` digits as a base-`p` number.
//! Enumeration walks encodings in increasing order.

mod ops;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::arith;
use crate::error::{Error, Result};
use ops::{BaseOps, Tables};

/// Largest prime accepted by [`FieldCtx::prime`].
pub const DEFAULT_PRIME_CAP: u64 = 1000;

/// Default number of elements any enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

pub struct FieldCtx {
    p: u32,
    base: Option<Arc<FieldCtx>>,
    ext_degree: usize,
    abs_degree: usize,
    base_size: u64,
    size: u64,
    /// Monic modulus over the base, `ext_degree + 1` coefficient encodings.
    modulus: Vec<u32>,
    ops: BaseOps,
    id: u64,
}

/// An element of some [`FieldCtx`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coeffs: Vec<u32>,
    ctx_id: u64,
}

impl FieldElement {
    /// Coefficient encodings over the base field, constant term first.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn ctx_id(&self) -> u64 {
        self.ctx_id
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({})", render_coeffs(&self.coeffs))
    }
}

fn render_coeffs(c: &[u32]) -> String {
    c.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("ext_degree", &self.ext_degree)
            .field("abs_degree", &self.abs_degree)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.modulus == other.modulus
            && self.abs_degree == other.abs_degree
            && self.base == other.base
    }
}

impl FieldCtx {
    /// `F_p` for a prime `p ≤` [`DEFAULT_PRIME_CAP`].
    pub fn prime(p: u64) -> Result<Arc<FieldCtx>> {
        Self::prime_with_cap(p, DEFAULT_PRIME_CAP)
    }

    pub fn prime_with_cap(p: u64, cap: u64) -> Result<Arc<FieldCtx>> {
        arith::require_prime(p)?;
        if p > cap {
            return Err(Error::PrimeTooLarge { p, cap });
        }
        let p = p as u32;
        Ok(Arc::new(FieldCtx {
            p,
            base: None,
            ext_degree: 1,
            abs_degree: 1,
            base_size: p as u64,
            size: p as u64,
            modulus: vec![0, 1],
            ops: BaseOps::Prime { p },
            id: p as u64,
        }))
    }

    /// Degree-`n` extension of `base` with the canonical least modulus.
    pub fn extend(base: &Arc<FieldCtx>, n: usize) -> Result<Arc<FieldCtx>> {
        if n == 0 {
            return Err(Error::Unsupported("extension degree must be positive".into()));
        }
        let abs_degree = base.abs_degree * n;
        let size = arith::checked_pow(base.size, n as u32).ok_or(Error::FieldTooLarge {
            p: base.p,
            abs_degree,
        })?;
        if size > u64::MAX / 2 {
            return Err(Error::FieldTooLarge {
                p: base.p,
                abs_degree,
            });
        }
        let ops = if base.base.is_none() {
            BaseOps::Prime { p: base.p }
        } else if base.size <= ops::TABLE_LIMIT {
            BaseOps::Table(Box::new(Tables::build(base)))
        } else {
            BaseOps::Nested(Arc::clone(base))
        };
        let modulus = least_irreducible(&ops, base.size, n);
        let id = base
            .id
            .wrapping_mul(0x0000_0100_0000_01b3)
            .wrapping_add(n as u64 ^ 0x9e37_79b9);
        Ok(Arc::new(FieldCtx {
            p: base.p,
            base: Some(Arc::clone(base)),
            ext_degree: n,
            abs_degree,
            base_size: base.size,
            size,
            modulus,
            ops,
            id,
        }))
    }

    /// Canonical `F_{p^s}`: `F_p` itself for `s = 1`, else a degree-`s`
    /// extension of `F_p`.
    pub fn galois(p: u64, s: usize) -> Result<Arc<FieldCtx>> {
        let fp = Self::prime(p)?;
        if s == 1 {
            Ok(fp)
        } else {
            Self::extend(&fp, s)
        }
    }

    /// Parses a field description such as `"2"`, `"4"`, `"9"` or `"3^2"`.
    pub fn from_description(desc: &str) -> Result<Arc<FieldCtx>> {
        let bad = |m: &str| Error::Parse {
            column: 1,
            message: format!("field description {desc:?}: {m}"),
        };
        let (p, s) = if let Some((a, b)) = desc.split_once('^') {
            let p: u64 = a.trim().parse().map_err(|_| bad("bad prime"))?;
            let s: u32 = b.trim().parse().map_err(|_| bad("bad exponent"))?;
            (p, s)
        } else {
            let q: u64 = desc.trim().parse().map_err(|_| bad("not an integer"))?;
            arith::prime_power(q).ok_or_else(|| bad("not a prime power"))?
        };
        arith::require_prime(p)?;
        if s == 0 {
            return Err(bad("exponent must be positive"));
        }
        Self::galois(p, s as usize)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ext_degree(&self) -> usize {
        self.ext_degree
    }

    /// Degree over `F_p`.
    pub fn abs_degree(&self) -> usize {
        self.abs_degree
    }

    /// Number of elements.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn base(&self) -> Option<&Arc<FieldCtx>> {
        self.base.as_ref()
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    /// Modulus coefficients over the base (constant term first), as
    /// canonical encodings; the last entry is always 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn wrap(&self, coeffs: Vec<u32>) -> FieldElement {
        FieldElement {
            coeffs,
            ctx_id: self.id,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(vec![0; self.ext_degree])
    }

    pub fn one(&self) -> FieldElement {
        let mut c = vec![0; self.ext_degree];
        c[0] = 1;
        self.wrap(c)
    }

    /// The class of `t`, the adjoined root of the modulus.
    pub fn generator(&self) -> FieldElement {
        if self.ext_degree == 1 {
            // t ≡ -m_0 for a linear modulus t + m_0.
            return self.wrap(vec![self.ops.neg(self.modulus[0])]);
        }
        let mut c = vec![0; self.ext_degree];
        c[1] = 1;
        self.wrap(c)
    }

    /// Builds an element from base-field coefficient encodings.
    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.ext_degree {
            return Err(Error::MalformedElement(format!(
                "{} coefficients for a degree-{} extension",
                coeffs.len(),
                self.ext_degree
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c as u64 >= self.base_size) {
            return Err(Error::MalformedElement(format!(
                "coefficient {c} is not reduced below {}",
                self.base_size
            )));
        }
        let mut v = coeffs.to_vec();
        v.resize(self.ext_degree, 0);
        Ok(self.wrap(v))
    }

    /// Builds an element from its flattened `F_p` digits (constant first).
    pub fn from_flat_digits(&self, digits: &[u32]) -> Result<FieldElement> {
        if digits.len() > self.abs_degree || digits.iter().any(|&d| d >= self.p) {
            return Err(Error::MalformedElement(format!(
                "digits {digits:?} do not describe an element of a field of order {}^{}",
                self.p, self.abs_degree
            )));
        }
        let e = digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.p as u64 + d as u64);
        Ok(self.from_encoding(e))
    }

    /// Flattened `F_p` digits of an element, constant first.
    pub fn flat_digits(&self, a: &FieldElement) -> Vec<u32> {
        let mut e = self.encoding(a);
        (0..self.abs_degree)
            .map(|_| {
                let d = (e % self.p as u64) as u32;
                e /= self.p as u64;
                d
            })
            .collect()
    }

    /// Element whose canonical encoding is `e` (`e < size`).
    pub fn from_encoding(&self, e: u64) -> FieldElement {
        assert!(e < self.size, "encoding {e} out of range");
        self.wrap(self.decode(e))
    }

    pub fn encoding(&self, a: &FieldElement) -> u64 {
        self.encode(&a.coeffs)
    }

    /// Embeds an element of the base field as a constant polynomial.
    pub fn embed(&self, b: &FieldElement) -> Result<FieldElement> {
        let base = self.base.as_ref().ok_or(Error::ContextMismatch)?;
        base.check(b)?;
        let mut c = vec![0; self.ext_degree];
        c[0] = base.encoding(b) as u32;
        Ok(self.wrap(c))
    }

    fn check(&self, a: &FieldElement) -> Result<()> {
        if a.ctx_id != self.id || a.coeffs.len() != self.ext_degree {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.add_raw(&a.coeffs, &b.coeffs)))
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.sub_raw(&a.coeffs, &b.coeffs)))
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        Ok(self.wrap(self.neg_raw(&a.coeffs)))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.mul_raw(&a.coeffs, &b.coeffs)))
    }

    pub fn inverse(&self, a: &FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        Ok(self.wrap(self.inverse_raw(&a.coeffs)?))
    }

    /// `a^e` by square-and-multiply, with `0^0 = 1`.
    pub fn pow(&self, a: &FieldElement, e: &BigUint) -> Result<FieldElement> {
        self.check(a)?;
        Ok(self.wrap(self.pow_raw(&a.coeffs, e)))
    }

    pub fn pow_u64(&self, a: &FieldElement, e: u64) -> Result<FieldElement> {
        self.pow(a, &BigUint::from(e))
    }

    /// `a^(p^k)`.
    pub fn frobenius_iter(&self, a: &FieldElement, k: usize) -> Result<FieldElement> {
        self.check(a)?;
        Ok(self.wrap(self.frobenius_raw(&a.coeffs, k)))
    }

    /// Whether the relative trace of `c` down to `F_{p^g}`,
    /// `Σ_{i < m/g} c^(p^{g i})`, vanishes.
    pub fn trace_vanishes(&self, c: &FieldElement, g: usize) -> Result<bool> {
        self.check(c)?;
        Ok(self.relative_trace(&c.coeffs, g)?.iter().all(|&x| x == 0))
    }

    /// Lists every element in increasing encoding order.
    pub fn enumerate(&self, budget: u64) -> Result<impl Iterator<Item = FieldElement> + '_> {
        if self.size > budget {
            return Err(Error::BudgetExceeded {
                what: format!("enumerating F_{}^{}", self.p, self.abs_degree),
                required: self.size as u128,
                budget,
            });
        }
        Ok((0..self.size).map(move |e| self.from_encoding(e)))
    }

    /// Renders an element as comma-separated base coefficients.
    pub fn render(&self, a: &FieldElement) -> String {
        render_coeffs(&a.coeffs)
    }

    /// Renders an element as its flattened `F_p` digits.
    pub fn render_flat(&self, a: &FieldElement) -> String {
        render_coeffs(&self.flat_digits(a))
    }

    // ---- raw coefficient-vector arithmetic ----

    pub(crate) fn decode(&self, mut e: u64) -> Vec<u32> {
        (0..self.ext_degree)
            .map(|_| {
                let c = (e % self.base_size) as u32;
                e /= self.base_size;
                c
            })
            .collect()
    }

    pub(crate) fn encode(&self, c: &[u32]) -> u64 {
        c.iter()
            .rev()
            .fold(0u64, |acc, &x| acc * self.base_size + x as u64)
    }

    pub(crate) fn add_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| self.ops.add(x, y)).collect()
    }

    pub(crate) fn sub_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| self.ops.sub(x, y)).collect()
    }

    pub(crate) fn neg_raw(&self, a: &[u32]) -> Vec<u32> {
        a.iter().map(|&x| self.ops.neg(x)).collect()
    }

    pub(crate) fn add_assign_raw(&self, a: &mut [u32], b: &[u32]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x = self.ops.add(*x, y);
        }
    }

    pub(crate) fn mul_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = self.ext_degree;
        if n == 1 {
            // Reduction modulo a linear t + m_0 substitutes t = -m_0, but all
            // operands are already constants.
            return vec![self.ops.mul(a[0], b[0])];
        }
        if let BaseOps::Prime { p } = self.ops {
            return self.mul_prime(a, b, p as u64);
        }
        let mut prod = vec![0u32; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = self.ops.add(prod[i + j], self.ops.mul(x, y));
                }
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..n {
                let m = self.modulus[i];
                if m != 0 {
                    prod[k - n + i] = self.ops.sub(prod[k - n + i], self.ops.mul(c, m));
                }
            }
        }
        prod.truncate(n);
        prod
    }

    fn mul_prime(&self, a: &[u32], b: &[u32], p: u64) -> Vec<u32> {
        let n = self.ext_degree;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as u64;
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] += x * y as u64;
            }
            // Keep accumulators well below overflow for large p.
            if p > 1 << 12 {
                for v in prod.iter_mut() {
                    *v %= p;
                }
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            for i in 0..n {
                let m = self.modulus[i] as u64;
                if m != 0 {
                    prod[k - n + i] = (prod[k - n + i] + c * (p - m)) % p;
                }
            }
        }
        prod.truncate(n);
        prod.into_iter().map(|v| (v % p) as u32).collect()
    }

    pub(crate) fn pow_raw(&self, a: &[u32], e: &BigUint) -> Vec<u32> {
        let mut acc = self.one().coeffs;
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = self.mul_raw(&acc, &acc);
            if e.bit(i) {
                acc = self.mul_raw(&acc, a);
            }
        }
        acc
    }

    pub(crate) fn pow_raw_u64(&self, a: &[u32], e: u64) -> Vec<u32> {
        let mut acc = self.one().coeffs;
        for i in (0..64 - e.leading_zeros()).rev() {
            acc = self.mul_raw(&acc, &acc);
            if (e >> i) & 1 == 1 {
                acc = self.mul_raw(&acc, a);
            }
        }
        acc
    }

    pub(crate) fn inverse_raw(&self, a: &[u32]) -> Result<Vec<u32>> {
        if a.iter().all(|&c| c == 0) {
            return Err(Error::InverseOfZero);
        }
        Ok(self.pow_raw_u64(a, self.size - 2))
    }

    pub(crate) fn frobenius_raw(&self, a: &[u32], k: usize) -> Vec<u32> {
        let mut x = a.to_vec();
        for _ in 0..k % self.abs_degree {
            x = self.pow_raw_u64(&x, self.p as u64);
        }
        x
    }

    pub(crate) fn relative_trace(&self, c: &[u32], g: usize) -> Result<Vec<u32>> {
        let m = self.abs_degree;
        if g == 0 || !m.is_multiple_of(g) {
            return Err(Error::DegreeMismatch { g, m });
        }
        let mut sum = vec![0u32; self.ext_degree];
        let mut x = c.to_vec();
        for _ in 0..m / g {
            self.add_assign_raw(&mut sum, &x);
            x = self.frobenius_raw(&x, g);
        }
        Ok(sum)
    }
}

/// Smallest monic irreducible polynomial of degree `n` over a base of order
/// `base_size`, ordering candidates by `Σ c_k B^k` over the non-leading
/// coefficients.
fn least_irreducible(ops: &BaseOps, base_size: u64, n: usize) -> Vec<u32> {
    let count = base_size.checked_pow(n as u32).unwrap_or(u64::MAX);
    for idx in 0..count {
        let mut f = vec![0u32; n + 1];
        let mut m = idx;
        for c in f.iter_mut().take(n) {
            *c = (m % base_size) as u32;
            m /= base_size;
        }
        f[n] = 1;
        if ops::is_irreducible(ops, &f, base_size) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// `F_p`-linear functionals cutting out the kernel of the relative trace
/// to `F_{p^g}`, precomputed for repeated vanishing tests.
pub(crate) struct TraceKernel {
    p: u32,
    s: usize,
    base_size: u64,
    rows: Vec<Vec<u32>>,
}

impl TraceKernel {
    pub(crate) fn new(ctx: &FieldCtx, g: usize) -> Result<TraceKernel> {
        let m = ctx.abs_degree;
        let p = ctx.p as u64;
        let s = m / ctx.ext_degree;
        // Column j holds the flat digits of Tr(e_j).
        let mut matrix = vec![vec![0u32; m]; m];
        for j in 0..m {
            let e = p.pow((j % s) as u32);
            let mut coeffs = vec![0u32; ctx.ext_degree];
            coeffs[j / s] = e as u32;
            let tr = ctx.relative_trace(&coeffs, g)?;
            let digits = ctx.flat_digits(&ctx.wrap(tr));
            for (i, d) in digits.into_iter().enumerate() {
                matrix[i][j] = d;
            }
        }
        let rows = row_basis(matrix, p);
        Ok(TraceKernel {
            p: ctx.p,
            s,
            base_size: ctx.base_size,
            rows,
        })
    }

    #[cfg(test)]
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Tests a raw coefficient vector of the owning context.
    #[inline]
    pub(crate) fn vanishes(&self, coeffs: &[u32], scratch: &mut Vec<u32>) -> bool {
        scratch.clear();
        let p = self.p;
        for &c in coeffs {
            let mut c = c;
            for _ in 0..self.s {
                scratch.push(c % p);
                c /= p;
            }
        }
        debug_assert!(coeffs.iter().all(|&c| (c as u64) < self.base_size));
        self.rows.iter().all(|row| {
            let mut acc = 0u64;
            for (&r, &x) in row.iter().zip(scratch.iter()) {
                acc += r as u64 * x as u64;
            }
            acc.is_multiple_of(p as u64)
        })
    }
}

/// Row-reduces a matrix over `F_p`, returning a basis of its row space.
fn row_basis(mut m: Vec<Vec<u32>>, p: u64) -> Vec<Vec<u32>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][col] as u64, p);
        for x in m[rank].iter_mut() {
            *x = (*x as u64 * inv % p) as u32;
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col] as u64;
                for c in 0..cols {
                    let v = (m[r][c] as u64 + (p - f) * m[rank][c] as u64) % p;
                    m[r][c] = v as u32;
                }
            }
        }
        rank += 1;
    }
    m.truncate(rank);
    m
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl FieldElement {
    /// True when this is the multiplicative identity.
    pub fn is_one(&self) -> bool {
        self.coeffs.first() == Some(&1) && self.coeffs[1..].iter().all(|&c| c == 0)
    }
}

#[cfg(test)]
mod tests;
