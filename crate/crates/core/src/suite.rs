//! Parameter grids over the series identities, shared by the CLI and the
//! test suites. Each grid counts cases and keeps the first failure.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::error::Result;
use crate::newton::Rational;
use crate::series::{self, TruncSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridResult {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
    pub note: Option<String>,
}

impl GridResult {
    fn new(name: &'static str) -> GridResult {
        GridResult {
            name,
            checked: 0,
            failed: 0,
            first_failure: None,
            note: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }
}

/// `y^q - y - z ≡ 0` to order `R`.
pub fn grid_y(qs: &[u64], order: usize) -> Result<GridResult> {
    let mut g = GridResult::new("y");
    for &q in qs {
        let y = series::solve_y(q, order, None)?;
        let res = series::residual(&y, q);
        let bad = res.coeffs.iter().position(|c| *c != BigInt::from(0));
        g.record(bad.is_none(), || format!("q={q}: residual nonzero at z^{}", bad.unwrap()));
    }
    Ok(g)
}

/// `D_{k1}(a)` against the `z^{k1}` coefficient of `y^a`.
pub fn grid_d(qs: &[u64], a_max: u64, k_max: u64) -> Result<GridResult> {
    let mut g = GridResult::new("D");
    for &q in qs {
        let y = series::solve_y(q, k_max as usize, None)?;
        let mut ya = TruncSeries::one(k_max as usize, None);
        for a in 1..=a_max {
            ya = ya.mul(&y);
            for k1 in 0..=k_max {
                let d = series::d_coeff(a, k1, q);
                let s = &ya.coeffs[k1 as usize];
                g.record(d == *s, || format!("q={q} a={a} k1={k1}: closed {d} vs series {s}"));
            }
        }
    }
    Ok(g)
}

/// The stated valuation of `D_{k1}(a)` over every nonzero coefficient.
pub fn grid_dk(qs: &[u64], a_max: u64, k_max: u64) -> Result<GridResult> {
    let mut g = GridResult::new("dk");
    let mut corrected_failures = 0;
    for &q in qs {
        for a in 1..=a_max {
            for k1 in 1..=k_max {
                if series::d_coeff(a, k1, q) == BigInt::from(0) {
                    continue;
                }
                let r = series::ord_d_check(a, k1, q)?;
                if !r.holds_with_ord_a {
                    corrected_failures += 1;
                }
                g.record(r.holds, || {
                    format!(
                        "q={q} a={a} k1={k1} (i={}, l={}): ord_p D = {} vs predicted {}",
                        r.i, r.l, r.observed, r.predicted
                    )
                });
            }
        }
    }
    g.note = Some(format!(
        "{corrected_failures} failures once ord_p(a) is added to the l = 0 prediction"
    ));
    Ok(g)
}

/// Series `E` against the closed form, vanishing off `k1 ≡ i mod (q-1)`,
/// and `ord_p E_{k1}(0, N) = s_p(k1)/(p-1)`.
pub fn grid_e(qs: &[u64], ns: &[u32], order: usize) -> Result<GridResult> {
    let mut g = GridResult::new("E");
    for &q in qs {
        let (p, _) = arith::prime_power(q).expect("prime power");
        for &n in ns {
            for i in 0..q {
                let e = series::e_coeffs(i, n, q, order, None)?;
                for k1 in 0..=order as u64 {
                    let closed = series::e_closed_form(k1, i, n, q)?;
                    let s = &e.coeffs[k1 as usize];
                    g.record(closed == *s, || {
                        format!("q={q} N={n} i={i} k1={k1}: closed {closed} vs series {s}")
                    });
                    if (k1 + (q - 1) - i % (q - 1)) % (q - 1) != 0 {
                        g.record(s == &BigInt::from(0), || {
                            format!("q={q} N={n} i={i} k1={k1}: nonzero off the class")
                        });
                    } else if i == 0 && k1 > 0 {
                        let v = arith::ord_p(s, p).map(|v| v as u64 * (p - 1));
                        let want = arith::digit_sum(k1, p);
                        g.record(v == Some(want), || {
                            format!("q={q} N={n} k1={k1}: (p-1)·ord_p E = {v:?}, s_p = {want}")
                        });
                    }
                }
            }
        }
    }
    Ok(g)
}

fn random_lifts(rng: &mut ChaCha8Rng, p: u64, d_max: u64) -> Vec<u64> {
    let d = loop {
        let d = rng.gen_range(1..=d_max);
        if d % p != 0 {
            break d;
        }
    };
    let mut l: Vec<u64> = (0..=d).map(|_| rng.gen_range(0..p)).collect();
    if l[d as usize] == 0 {
        l[d as usize] = rng.gen_range(1..p);
    }
    l
}

/// Composition against the sum over `K_r`, `r ≤ r_max`, random lifts.
pub fn grid_c(qs: &[u64], ns: &[u32], r_max: u64, samples: usize, seed: u64) -> Result<GridResult> {
    let mut g = GridResult::new("C");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &q in qs {
        let (p, _) = arith::prime_power(q).expect("prime power");
        for _ in 0..samples {
            let lifts = random_lifts(&mut rng, p, 4);
            let i = rng.gen_range(0..q);
            for &n in ns {
                let comp = series::c_coeffs_from_lifts(&lifts, q, i, n, r_max as usize, None)?;
                for r in 0..=r_max {
                    let sum = series::c_combinatorial(&lifts, q, i, n, r)?;
                    let c = &comp[r as usize];
                    g.record(sum == *c, || {
                        format!("q={q} lifts={lifts:?} i={i} N={n} r={r}: {c} vs {sum}")
                    });
                }
            }
        }
    }
    Ok(g)
}

/// `C_r(i, N+a) ≡ C_r(i, N) mod p^{N+1}`.
pub fn grid_rel(qs: &[u64], order: usize, samples: usize, seed: u64) -> Result<GridResult> {
    let mut g = GridResult::new("rel");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &q in qs {
        let (p, _) = arith::prime_power(q).expect("prime power");
        for _ in 0..samples {
            let lifts = random_lifts(&mut rng, p, 5);
            for i in 0..q {
                for n in 1..=2 {
                    for a in 1..=2 {
                        let bad = series::rel_check(&lifts, q, i, n, a, order)?;
                        g.record(bad.is_none(), || {
                            format!("q={q} lifts={lifts:?} i={i} N={n} a={a}: first r = {}", bad.unwrap())
                        });
                    }
                }
            }
        }
    }
    Ok(g)
}

/// `(p, h, j, b)` families for the `C_{j(p^{bh}-1)}` congruence, with
/// `u = 1`, every `i < p`, `N ∈ {1, 2}`, every leading lift and every
/// choice of the lower lifts.
pub fn grid_cmod(families: &[(u64, u32, u64, u32)]) -> Result<GridResult> {
    let mut g = GridResult::new("cmod");
    for &(p, h, j, b) in families {
        let d = j * (p.pow(h) - 1);
        let lower_count = p.pow(d as u32 - 1);
        for lead in 0..p {
            for mask in 0..lower_count {
                let mut m = mask;
                let lower: Vec<u64> = (1..d)
                    .map(|_| {
                        let v = m % p;
                        m /= p;
                        v
                    })
                    .collect();
                for i in 0..p {
                    for n in 1..=2 {
                        let r = series::cmod_check(p, 1, h, j, i, n, b, lead, &lower)?;
                        g.record(r.holds(), || {
                            format!(
                                "p={p} h={h} j={j} b={b} i={i} N={n} lead={lead} lower={lower:?}: C_{} ≡ {} mod {}, predicted {}",
                                r.r, r.observed, r.modulus, r.expected
                            )
                        });
                    }
                }
            }
        }
    }
    Ok(g)
}

/// `ord_p C_r(i, N) ≥ (s̃_p(r, supp) - s_p(i-1) - 1)/(p-1)` for
/// `r = m·p^M - j` up to `r_max`.
pub fn grid_valuation(ps: &[u64], r_max: u64, samples: usize, seed: u64) -> Result<GridResult> {
    let mut g = GridResult::new("val");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &p in ps {
        for _ in 0..samples {
            let lifts = random_lifts(&mut rng, p, 6);
            let supp: BTreeSet<u64> = (1..lifts.len() as u64).filter(|&l| lifts[l as usize] != 0).collect();
            let mut rs = BTreeSet::new();
            let mut pm = 1;
            while pm <= r_max + p {
                for m in 1..=r_max / pm + 1 {
                    for j in 1..p.max(2) {
                        if let Some(r) = (m * pm).checked_sub(j) {
                            if (1..=r_max).contains(&r) {
                                rs.insert(r);
                            }
                        }
                    }
                }
                pm *= p;
            }
            for i in 0..p {
                for n in 1..=2 {
                    let c = series::c_coeffs_from_lifts(&lifts, p, i, n, r_max as usize, None)?;
                    for &r in &rs {
                        let m = series::c_valuation_margin(&c[r as usize], r, &supp, p, i)?;
                        g.record(m.is_none_or(|m| m >= Rational::from_integer(0)), || {
                            format!("p={p} lifts={lifts:?} i={i} N={n} r={r}: margin {}", m.unwrap())
                        });
                    }
                }
            }
        }
    }
    Ok(g)
}

/// Mod-`p^K` evaluation against the exact one reduced.
pub fn grid_modular(qs: &[u64], order: usize, k: u32, seed: u64) -> Result<GridResult> {
    let mut g = GridResult::new("modular");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for &q in qs {
        let (p, _) = arith::prime_power(q).expect("prime power");
        let m = BigInt::from(p).pow(k);
        let lifts = random_lifts(&mut rng, p, 5);
        for i in 0..q {
            let exact = series::c_coeffs_from_lifts(&lifts, q, i, 2, order, None)?;
            let reduced = series::c_coeffs_from_lifts(&lifts, q, i, 2, order, Some(m.clone()))?;
            for (r, (a, b)) in exact.iter().zip(&reduced).enumerate() {
                g.record(a.mod_floor(&m) == *b, || format!("q={q} i={i} r={r}"));
            }
        }
    }
    Ok(g)
}
