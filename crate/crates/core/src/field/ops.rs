//! Coefficient arithmetic for one level of a tower, plus the univariate
//! polynomial routines used to pick and test moduli.
//!
//! Coefficients are carried as canonical integer encodings of base-field
//! elements (`0` is zero, `1` is one).

use std::sync::Arc;

use super::FieldCtx;

/// Base fields up to this order get precomputed operation tables.
pub(crate) const TABLE_LIMIT: u64 = 256;

pub(crate) enum BaseOps {
    Prime { p: u32 },
    Table(Box<Tables>),
    Nested(Arc<FieldCtx>),
}

pub(crate) struct Tables {
    size: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl Tables {
    pub(crate) fn build(ctx: &FieldCtx) -> Tables {
        let size = ctx.size() as usize;
        let mut add = vec![0; size * size];
        let mut mul = vec![0; size * size];
        let mut neg = vec![0; size];
        let mut inv = vec![0; size];
        let elems: Vec<Vec<u32>> = (0..size as u64).map(|e| ctx.decode(e)).collect();
        for a in 0..size {
            neg[a] = ctx.encode(&ctx.neg_raw(&elems[a])) as u32;
            for b in 0..size {
                add[a * size + b] = ctx.encode(&ctx.add_raw(&elems[a], &elems[b])) as u32;
                let prod = ctx.encode(&ctx.mul_raw(&elems[a], &elems[b])) as u32;
                mul[a * size + b] = prod;
                if prod == 1 {
                    inv[a] = b as u32;
                }
            }
        }
        Tables {
            size,
            add,
            mul,
            neg,
            inv,
        }
    }
}

impl BaseOps {
    #[inline]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        match self {
            BaseOps::Prime { p } => {
                let s = a + b;
                if s >= *p {
                    s - p
                } else {
                    s
                }
            }
            BaseOps::Table(t) => t.add[a as usize * t.size + b as usize],
            BaseOps::Nested(ctx) => {
                ctx.encode(&ctx.add_raw(&ctx.decode(a as u64), &ctx.decode(b as u64))) as u32
            }
        }
    }

    #[inline]
    pub(crate) fn neg(&self, a: u32) -> u32 {
        match self {
            BaseOps::Prime { p } => {
                if a == 0 {
                    0
                } else {
                    p - a
                }
            }
            BaseOps::Table(t) => t.neg[a as usize],
            BaseOps::Nested(ctx) => ctx.encode(&ctx.neg_raw(&ctx.decode(a as u64))) as u32,
        }
    }

    #[inline]
    pub(crate) fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        match self {
            BaseOps::Prime { p } => ((a as u64 * b as u64) % *p as u64) as u32,
            BaseOps::Table(t) => t.mul[a as usize * t.size + b as usize],
            BaseOps::Nested(ctx) => {
                ctx.encode(&ctx.mul_raw(&ctx.decode(a as u64), &ctx.decode(b as u64))) as u32
            }
        }
    }

    /// Inverse of a nonzero coefficient.
    pub(crate) fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        match self {
            BaseOps::Prime { p } => {
                let p = *p as u64;
                let mut acc = 1u64;
                let mut b = a as u64;
                let mut e = p - 2;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * b % p;
                    }
                    b = b * b % p;
                    e >>= 1;
                }
                acc as u32
            }
            BaseOps::Table(t) => t.inv[a as usize],
            BaseOps::Nested(ctx) => {
                let e = ctx
                    .inverse_raw(&ctx.decode(a as u64))
                    .expect("nonzero coefficient");
                ctx.encode(&e) as u32
            }
        }
    }
}

/// Polynomials over a base field, coefficients low to high, no trailing zeros.
pub(crate) type Poly = Vec<u32>;

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_sub(ops: &BaseOps, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            ops.sub(x, y)
        })
        .collect();
    trim(out)
}

fn poly_mul(ops: &BaseOps, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ops.add(out[i + j], ops.mul(x, y));
        }
    }
    trim(out)
}

/// Remainder of `a` modulo a nonzero `f`.
fn poly_rem(ops: &BaseOps, a: &[u32], f: &[u32]) -> Poly {
    let mut r = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = ops.inv(f[df]);
    while r.len() > df {
        let k = r.len() - 1;
        let c = ops.mul(r[k], lead_inv);
        for i in 0..=df {
            r[k - df + i] = ops.sub(r[k - df + i], ops.mul(c, f[i]));
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(ops: &BaseOps, a: &[u32], b: &[u32], f: &[u32]) -> Poly {
    poly_rem(ops, &poly_mul(ops, a, b), f)
}

fn poly_powmod(ops: &BaseOps, a: &[u32], mut e: u64, f: &[u32]) -> Poly {
    let mut acc = poly_rem(ops, &[1], f);
    let mut base = poly_rem(ops, a, f);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(ops, &acc, &base, f);
        }
        e >>= 1;
        if e > 0 {
            base = poly_mulmod(ops, &base, &base, f);
        }
    }
    acc
}

fn poly_gcd(ops: &BaseOps, a: &[u32], b: &[u32]) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = poly_rem(ops, &x, &y);
        x = y;
        y = r;
    }
    x
}

/// Distinct-degree irreducibility test for a monic `f` over a base of order
/// `base_size`: `f` is irreducible iff `gcd(f, t^{B^k} - t) = 1` for every
/// `k ≤ deg f / 2`.
pub(crate) fn is_irreducible(ops: &BaseOps, f: &[u32], base_size: u64) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let t: Poly = vec![0, 1];
    let mut h = t.clone();
    for _ in 1..=n / 2 {
        h = poly_powmod(ops, &h, base_size, f);
        let g = poly_gcd(ops, &poly_sub(ops, &h, &t), f);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Brute-force irreducibility: `f` has no monic factor of degree `1..=n/2`.
/// Only usable for tiny fields; kept as an oracle for tests.
#[cfg(test)]
pub(crate) fn is_irreducible_bruteforce(ops: &BaseOps, f: &[u32], base_size: u64) -> bool {
    let n = f.len() - 1;
    if n <= 1 {
        return n == 1;
    }
    for k in 1..=n / 2 {
        let count = base_size.pow(k as u32);
        for idx in 0..count {
            let mut g = vec![0u32; k + 1];
            let mut m = idx;
            for c in g.iter_mut().take(k) {
                *c = (m % base_size) as u32;
                m /= base_size;
            }
            g[k] = 1;
            if poly_rem(ops, f, &g).is_empty() {
                return false;
            }
        }
    }
    true
}
